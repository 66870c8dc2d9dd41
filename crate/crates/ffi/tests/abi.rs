use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use favornet_ffi::*;

fn last_error() -> String {
    let p = favornet_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn catalog_graph(name: &str) -> *mut FavornetGraph {
    let name = CString::new(name).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { favornet_graph_from_catalog(name.as_ptr(), &mut g) },
        FavornetStatus::Ok
    );
    g
}

#[test]
fn graph_roundtrip_and_classify() {
    let edges = [0u32, 1, 1, 2, 0, 2];
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(
            favornet_graph_new(3, edges.as_ptr(), 3, &mut g),
            FavornetStatus::Ok
        );
        assert_eq!(favornet_graph_node_count(g), 3);
        assert_eq!(favornet_graph_edge_count(g), 3);

        let mut buf = [0u32; 6];
        let mut written = 0usize;
        assert_eq!(
            favornet_graph_edges(g, buf.as_mut_ptr(), 3, &mut written),
            FavornetStatus::Ok
        );
        assert_eq!(written, 3);
        assert_eq!(buf, [0, 1, 0, 2, 1, 2]);
        assert_eq!(
            favornet_graph_edges(g, buf.as_mut_ptr(), 1, &mut written),
            FavornetStatus::BufferTooSmall
        );

        let mut c = FavornetClassification::default();
        assert_eq!(favornet_classify(g, 2, &mut c), FavornetStatus::Ok);
        assert!(c.is_rpe && c.is_lcc && c.is_social_quilt && c.is_simple_cycle);
        assert_eq!(c.cc, 1);
        favornet_graph_free(g);
    }
}

#[test]
fn catalog_cc_values() {
    for (name, want) in [
        ("1R3", 1),
        ("1R4", 1),
        ("1R5", 1),
        ("2R3", 2),
        ("2R4", 2),
        ("3R3", 3),
    ] {
        let g = catalog_graph(name);
        let mut cc = 0u32;
        assert_eq!(
            unsafe { favornet_cc(g, 2, &mut cc) },
            FavornetStatus::Ok,
            "{name}"
        );
        assert_eq!(cc, want, "{name}");
        unsafe { favornet_graph_free(g) };
    }
    let g = catalog_graph("N1R3");
    let mut cc = 0u32;
    assert_eq!(unsafe { favornet_cc(g, 2, &mut cc) }, FavornetStatus::NotTc);
    let mut c = FavornetClassification::default();
    assert_eq!(
        unsafe { favornet_classify(g, 2, &mut c) },
        FavornetStatus::Ok
    );
    assert!(!c.is_rpe);
    assert_eq!(c.cc, -1);
    unsafe { favornet_graph_free(g) };
}

#[test]
fn error_codes_and_messages() {
    let mut g = ptr::null_mut();
    let self_loop = [1u32, 1];
    assert_eq!(
        unsafe { favornet_graph_new(3, self_loop.as_ptr(), 1, &mut g) },
        FavornetStatus::InvalidGraph
    );
    assert!(last_error().contains("self-loop"));
    assert!(g.is_null());

    let name = CString::new("7R9").unwrap();
    assert_eq!(
        unsafe { favornet_graph_from_catalog(name.as_ptr(), &mut g) },
        FavornetStatus::UnknownNetwork
    );
    assert!(last_error().contains("1R3"));

    assert_eq!(
        unsafe { favornet_graph_new(3, ptr::null(), 0, ptr::null_mut()) },
        FavornetStatus::NullPointer
    );
    let mut cc = 0u32;
    assert_eq!(
        unsafe { favornet_cc(ptr::null(), 2, &mut cc) },
        FavornetStatus::NullPointer
    );

    unsafe {
        favornet_graph_free(ptr::null_mut());
        favornet_game_free(ptr::null_mut());
        favornet_string_free(ptr::null_mut());
    }
}

#[test]
fn equilibrium_game_through_the_abi() {
    let g = catalog_graph("N1R4");
    let mut game = ptr::null_mut();
    unsafe {
        assert_eq!(
            favornet_game_new(g, 100, 110, 9, &mut game),
            FavornetStatus::Ok
        );
        let mut terminal = false;
        let mut turns = 0;
        loop {
            assert_eq!(
                favornet_game_is_terminal(game, &mut terminal),
                FavornetStatus::Ok
            );
            if terminal {
                break;
            }
            let mut player = 0u32;
            assert_eq!(
                favornet_game_next_player(game, &mut player),
                FavornetStatus::Ok
            );
            let mut current = ptr::null_mut();
            assert_eq!(favornet_game_graph(game, &mut current), FavornetStatus::Ok);
            let mut d = FavornetDecision {
                action: FavornetAction::Keep,
                i: 0,
                j: 0,
            };
            assert_eq!(
                favornet_equilibrium_decision(current, player, 2, &mut d),
                FavornetStatus::Ok
            );
            favornet_graph_free(current);
            assert_eq!(favornet_game_apply(game, player, &d), FavornetStatus::Ok);
            turns += 1;
            assert!(turns < 100);
        }
        let mut player = 0u32;
        assert_eq!(
            favornet_game_next_player(game, &mut player),
            FavornetStatus::GameOver
        );

        // The pendant link goes; the 4-ring survives.
        let mut last = ptr::null_mut();
        assert_eq!(favornet_game_graph(game, &mut last), FavornetStatus::Ok);
        assert_eq!(favornet_graph_edge_count(last), 4);
        favornet_graph_free(last);

        let mut payoffs = [0i64; 5];
        assert_eq!(
            favornet_game_payoffs(game, payoffs.as_mut_ptr(), 5),
            FavornetStatus::Ok
        );
        assert_eq!(payoffs.iter().sum::<i64>(), 100 * 2 * 4 + 110);
        assert_eq!(
            favornet_game_payoffs(game, payoffs.as_mut_ptr(), 2),
            FavornetStatus::BufferTooSmall
        );

        let mut hash = ptr::null_mut();
        assert_eq!(
            favornet_game_trace_hash(game, &mut hash),
            FavornetStatus::Ok
        );
        assert_eq!(CStr::from_ptr(hash).to_bytes().len(), 64);
        favornet_string_free(hash);

        let mut jsonl = ptr::null_mut();
        assert_eq!(
            favornet_game_trace_jsonl(game, &mut jsonl),
            FavornetStatus::Ok
        );
        let text = CStr::from_ptr(jsonl).to_str().unwrap().to_owned();
        assert_eq!(text.lines().count(), turns);
        favornet_string_free(jsonl);

        favornet_game_free(game);
        favornet_graph_free(g);
    }
}

#[test]
fn rejects_out_of_turn_and_absent_links() {
    let g = catalog_graph("1R3");
    let mut game = ptr::null_mut();
    unsafe {
        assert_eq!(
            favornet_game_new(g, 100, 110, 1, &mut game),
            FavornetStatus::Ok
        );
        let mut player = 0u32;
        favornet_game_next_player(game, &mut player);
        let other = (player + 1) % 3;
        let keep = FavornetDecision {
            action: FavornetAction::Keep,
            i: 0,
            j: 0,
        };
        assert_eq!(
            favornet_game_apply(game, other, &keep),
            FavornetStatus::InvalidDecision
        );
        let foreign = match player {
            0 => FavornetDecision {
                action: FavornetAction::Delete,
                i: 1,
                j: 2,
            },
            _ => FavornetDecision {
                action: FavornetAction::Delete,
                i: 0,
                j: 9,
            },
        };
        assert_eq!(
            favornet_game_apply(game, player, &foreign),
            FavornetStatus::InvalidDecision
        );
        let mut payoffs = [0i64; 3];
        assert_eq!(
            favornet_game_payoffs(game, payoffs.as_mut_ptr(), 3),
            FavornetStatus::GameNotOver
        );
        favornet_game_free(game);

        assert_eq!(
            favornet_game_new(g, 100, 300, 1, &mut game),
            FavornetStatus::InvalidArgument
        );
        favornet_graph_free(g);
    }
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/favornet.h")
}

#[test]
fn header_declares_the_abi() {
    let text = std::fs::read_to_string(header()).expect("generated header");
    for symbol in [
        "typedef struct FavornetGraph FavornetGraph;",
        "typedef struct FavornetGame FavornetGame;",
        "FAVORNET_STATUS_OK = 0",
        "FAVORNET_STATUS_NOT_TC",
        "favornet_graph_new(",
        "favornet_classify(",
        "favornet_cc(",
        "favornet_game_apply(",
        "favornet_equilibrium_decision(",
        "favornet_last_error_message(",
    ] {
        assert!(text.contains(symbol), "header lacks {symbol}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(header())
        .status()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(status.success());
}
