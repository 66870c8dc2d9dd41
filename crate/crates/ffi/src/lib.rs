//! C ABI for favornet.
//!
//! Every fallible function returns a [`FavornetStatus`]; on failure the
//! message is available from [`favornet_last_error_message`] on the same
//! thread. Handles are opaque and must be released with their `_free`
//! function. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use favornet::agents::equilibrium_decision;
use favornet::catalog::catalog;
use favornet::equilibrium::{cc_number, classify};
use favornet::game::{Decision, GameConfig, GameState};
use favornet::{Error, Graph};

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FavornetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGraph = 3,
    NotTc = 4,
    ResourceLimit = 5,
    UnknownNetwork = 6,
    GameOver = 7,
    InvalidDecision = 8,
    BufferTooSmall = 9,
    GameNotOver = 10,
    Panic = 98,
    Internal = 99,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FavornetAction {
    Keep = 0,
    Delete = 1,
}

/// A keep, or the deletion of link (i, j). `i` and `j` are ignored for keeps.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FavornetDecision {
    pub action: FavornetAction,
    pub i: u32,
    pub j: u32,
}

/// `cc` is -1 when the network is not TC.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FavornetClassification {
    pub is_rpe: bool,
    pub cc: i32,
    pub is_lcc: bool,
    pub is_social_quilt: bool,
    pub is_simple_cycle: bool,
}

/// Opaque network handle.
pub struct FavornetGraph(Graph);

/// Opaque game handle.
pub struct FavornetGame(GameState);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> FavornetStatus {
    match e {
        Error::NodeCount(_)
        | Error::SelfLoop(_)
        | Error::DuplicateEdge(_)
        | Error::EndpointOutOfRange { .. }
        | Error::AbsentEdge(_) => FavornetStatus::InvalidGraph,
        Error::NotTc => FavornetStatus::NotTc,
        Error::ResourceLimit { .. } => FavornetStatus::ResourceLimit,
        Error::UnknownNetwork { .. } => FavornetStatus::UnknownNetwork,
        Error::GameOver => FavornetStatus::GameOver,
        Error::GameNotOver => FavornetStatus::GameNotOver,
        Error::OutOfTurn { .. } | Error::InvalidDecision { .. } => FavornetStatus::InvalidDecision,
        Error::InvalidMultiple(_) | Error::Config(_) | Error::Parameter(_) => {
            FavornetStatus::InvalidArgument
        }
        _ => FavornetStatus::Internal,
    }
}

fn guard(f: impl FnOnce() -> Result<(), FavornetStatus>) -> FavornetStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FavornetStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic");
            FavornetStatus::Panic
        }
    }
}

fn fail(e: Error) -> FavornetStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> FavornetStatus {
    set_error(format!("{what} is null"));
    FavornetStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, FavornetStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, FavornetStatus> {
    p.as_mut().ok_or_else(|| null(what))
}

fn to_decision(d: &FavornetDecision) -> Decision {
    match d.action {
        FavornetAction::Keep => Decision::Keep,
        FavornetAction::Delete => Decision::Delete((d.i as usize, d.j as usize)),
    }
}

fn from_decision(d: Decision) -> FavornetDecision {
    match d {
        Decision::Keep => FavornetDecision {
            action: FavornetAction::Keep,
            i: 0,
            j: 0,
        },
        Decision::Delete((i, j)) => FavornetDecision {
            action: FavornetAction::Delete,
            i: i as u32,
            j: j as u32,
        },
    }
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn favornet_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn favornet_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a network on `n` nodes from `edge_count` pairs stored flat in
/// `edges` as i0, j0, i1, j1, ...
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable values (or may be NULL
/// when `edge_count` is 0); `out_graph` must be writable.
#[no_mangle]
pub unsafe extern "C" fn favornet_graph_new(
    n: usize,
    edges: *const u32,
    edge_count: usize,
    out_graph: *mut *mut FavornetGraph,
) -> FavornetStatus {
    guard(|| {
        let slot = out(out_graph, "out_graph")?;
        let pairs: Vec<(usize, usize)> = if edge_count == 0 {
            Vec::new()
        } else {
            if edges.is_null() {
                return Err(null("edges"));
            }
            std::slice::from_raw_parts(edges, 2 * edge_count)
                .chunks_exact(2)
                .map(|p| (p[0] as usize, p[1] as usize))
                .collect()
        };
        let g = Graph::new(n, &pairs).map_err(fail)?;
        *slot = Box::into_raw(Box::new(FavornetGraph(g)));
        Ok(())
    })
}

/// Looks up a catalog network by name, e.g. "2R3".
///
/// # Safety
/// `name` must be a NUL-terminated string; `out_graph` must be writable.
#[no_mangle]
pub unsafe extern "C" fn favornet_graph_from_catalog(
    name: *const c_char,
    out_graph: *mut *mut FavornetGraph,
) -> FavornetStatus {
    guard(|| {
        let slot = out(out_graph, "out_graph")?;
        if name.is_null() {
            return Err(null("name"));
        }
        let name = CStr::from_ptr(name).to_str().map_err(|_| {
            set_error("name is not UTF-8");
            FavornetStatus::InvalidArgument
        })?;
        let entry = catalog(name).map_err(fail)?;
        *slot = Box::into_raw(Box::new(FavornetGraph(entry.graph)));
        Ok(())
    })
}

/// # Safety
/// `graph` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn favornet_graph_free(graph: *mut FavornetGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of nodes, or 0 for NULL.
///
/// # Safety
/// `graph` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn favornet_graph_node_count(graph: *const FavornetGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.n())
}

/// Number of links, or 0 for NULL.
///
/// # Safety
/// `graph` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn favornet_graph_edge_count(graph: *const FavornetGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Copies links into `buf` as flat pairs. `capacity` counts pairs.
/// `*written` receives the link count even when the buffer is too small.
///
/// # Safety
/// `buf` must hold `2 * capacity` values; `written` must be writable.
#[no_mangle]
pub unsafe extern "C" fn favornet_graph_edges(
    graph: *const FavornetGraph,
    buf: *mut u32,
    capacity: usize,
    written: *mut usize,
) -> FavornetStatus {
    guard(|| {
        let g = deref(graph, "graph")?;
        let written = out(written, "written")?;
        let edges = g.0.edges();
        *written = edges.len();
        if edges.len() > capacity {
            set_error(format!("need room for {} links", edges.len()));
            return Err(FavornetStatus::BufferTooSmall);
        }
        if !edges.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            let dst = std::slice::from_raw_parts_mut(buf, 2 * edges.len());
            for (k, (i, j)) in edges.into_iter().enumerate() {
                dst[2 * k] = i as u32;
                dst[2 * k + 1] = j as u32;
            }
        }
        Ok(())
    })
}

/// Classifies a network for favor-cost multiple `m`.
///
/// # Safety
/// `graph` must be a live handle; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn favornet_classify(
    graph: *const FavornetGraph,
    m: u32,
    result: *mut FavornetClassification,
) -> FavornetStatus {
    guard(|| {
        let g = deref(graph, "graph")?;
        let result = out(result, "result")?;
        let c = classify(&g.0, m as usize).map_err(fail)?;
        *result = FavornetClassification {
            is_rpe: c.is_tc,
            cc: c.cc.map_or(-1, |v| v as i32),
            is_lcc: c.is_lcc,
            is_social_quilt: c.is_sq,
            is_simple_cycle: c.is_simple_cycle,
        };
        Ok(())
    })
}

/// Cognitive complexity; fails with `NotTc` for non-TC networks.
///
/// # Safety
/// `graph` must be a live handle; `cc` must be writable.
#[no_mangle]
pub unsafe extern "C" fn favornet_cc(
    graph: *const FavornetGraph,
    m: u32,
    cc: *mut u32,
) -> FavornetStatus {
    guard(|| {
        let g = deref(graph, "graph")?;
        let cc = out(cc, "cc")?;
        *cc = cc_number(&g.0, m as usize).map_err(fail)? as u32;
        Ok(())
    })
}

/// The equilibrium decision for node `me` facing `graph`.
///
/// # Safety
/// `graph` must be a live handle; `decision` must be writable.
#[no_mangle]
pub unsafe extern "C" fn favornet_equilibrium_decision(
    graph: *const FavornetGraph,
    me: u32,
    m: u32,
    decision: *mut FavornetDecision,
) -> FavornetStatus {
    guard(|| {
        let g = deref(graph, "graph")?;
        let decision = out(decision, "decision")?;
        if me as usize >= g.0.n() {
            set_error(format!("node {me} out of range"));
            return Err(FavornetStatus::InvalidArgument);
        }
        *decision =
            from_decision(equilibrium_decision(&g.0, me as usize, m as usize).map_err(fail)?);
        Ok(())
    })
}

/// Starts a game on a copy of `graph` with payoffs `b` per surviving link
/// and `c` per own deletion. Requires 2b > c > b.
///
/// # Safety
/// `graph` must be a live handle; `out_game` must be writable.
#[no_mangle]
pub unsafe extern "C" fn favornet_game_new(
    graph: *const FavornetGraph,
    b: i64,
    c: i64,
    seed: u64,
    out_game: *mut *mut FavornetGame,
) -> FavornetStatus {
    guard(|| {
        let g = deref(graph, "graph")?;
        let slot = out(out_game, "out_game")?;
        let cfg = GameConfig {
            b,
            c,
            ..GameConfig::with_seed(seed)
        };
        let state = GameState::new(&g.0, cfg).map_err(fail)?;
        *slot = Box::into_raw(Box::new(FavornetGame(state)));
        Ok(())
    })
}

/// # Safety
/// `game` must come from this library and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn favornet_game_free(game: *mut FavornetGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// # Safety
/// `game` must be a live handle; `terminal` must be writable.
#[no_mangle]
pub unsafe extern "C" fn favornet_game_is_terminal(
    game: *const FavornetGame,
    terminal: *mut bool,
) -> FavornetStatus {
    guard(|| {
        let game = deref(game, "game")?;
        *out(terminal, "terminal")? = game.0.is_terminal();
        Ok(())
    })
}

/// Node whose turn it is; fails with `GameOver` once terminal.
///
/// # Safety
/// `game` must be a live handle; `player` must be writable.
#[no_mangle]
pub unsafe extern "C" fn favornet_game_next_player(
    game: *const FavornetGame,
    player: *mut u32,
) -> FavornetStatus {
    guard(|| {
        let game = deref(game, "game")?;
        let player = out(player, "player")?;
        *player = game.0.next_player().map_err(fail)? as u32;
        Ok(())
    })
}

/// Applies `decision` for `player`, who must be the node on turn.
///
/// # Safety
/// `game` must be a live handle; `decision` must be readable.
#[no_mangle]
pub unsafe extern "C" fn favornet_game_apply(
    game: *mut FavornetGame,
    player: u32,
    decision: *const FavornetDecision,
) -> FavornetStatus {
    guard(|| {
        let game = out(game, "game")?;
        let decision = deref(decision, "decision")?;
        game.0
            .apply_decision(player as usize, to_decision(decision))
            .map_err(fail)
    })
}

/// Copies the current network into a new handle.
///
/// # Safety
/// `game` must be a live handle; `out_graph` must be writable.
#[no_mangle]
pub unsafe extern "C" fn favornet_game_graph(
    game: *const FavornetGame,
    out_graph: *mut *mut FavornetGraph,
) -> FavornetStatus {
    guard(|| {
        let game = deref(game, "game")?;
        let slot = out(out_graph, "out_graph")?;
        *slot = Box::into_raw(Box::new(FavornetGraph(game.0.graph().clone())));
        Ok(())
    })
}

/// Final payoffs, one per node. `capacity` must be at least the node count.
///
/// # Safety
/// `game` must be a live handle; `buf` must hold `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn favornet_game_payoffs(
    game: *const FavornetGame,
    buf: *mut i64,
    capacity: usize,
) -> FavornetStatus {
    guard(|| {
        let game = deref(game, "game")?;
        let payoffs = game.0.payoffs().map_err(fail)?;
        if payoffs.len() > capacity {
            set_error(format!("need room for {} payoffs", payoffs.len()));
            return Err(FavornetStatus::BufferTooSmall);
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        std::slice::from_raw_parts_mut(buf, payoffs.len()).copy_from_slice(&payoffs);
        Ok(())
    })
}

/// Hex SHA-256 of the trace so far. Free with [`favornet_string_free`].
///
/// # Safety
/// `game` must be a live handle; `hash` must be writable.
#[no_mangle]
pub unsafe extern "C" fn favornet_game_trace_hash(
    game: *const FavornetGame,
    hash: *mut *mut c_char,
) -> FavornetStatus {
    guard(|| {
        let game = deref(game, "game")?;
        let slot = out(hash, "hash")?;
        let s = CString::new(game.0.trace().hash()).map_err(|_| FavornetStatus::Internal)?;
        *slot = s.into_raw();
        Ok(())
    })
}

/// Trace as JSON lines, one event per line. Free with [`favornet_string_free`].
///
/// # Safety
/// `game` must be a live handle; `jsonl` must be writable.
#[no_mangle]
pub unsafe extern "C" fn favornet_game_trace_jsonl(
    game: *const FavornetGame,
    jsonl: *mut *mut c_char,
) -> FavornetStatus {
    guard(|| {
        let game = deref(game, "game")?;
        let slot = out(jsonl, "jsonl")?;
        let s = CString::new(game.0.trace().to_jsonl()).map_err(|_| FavornetStatus::Internal)?;
        *slot = s.into_raw();
        Ok(())
    })
}
