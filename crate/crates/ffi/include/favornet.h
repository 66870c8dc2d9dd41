#ifndef FAVORNET_H
#define FAVORNET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. Zero is success.
typedef enum FavornetStatus {
  FAVORNET_STATUS_OK = 0,
  FAVORNET_STATUS_NULL_POINTER = 1,
  FAVORNET_STATUS_INVALID_ARGUMENT = 2,
  FAVORNET_STATUS_INVALID_GRAPH = 3,
  FAVORNET_STATUS_NOT_TC = 4,
  FAVORNET_STATUS_RESOURCE_LIMIT = 5,
  FAVORNET_STATUS_UNKNOWN_NETWORK = 6,
  FAVORNET_STATUS_GAME_OVER = 7,
  FAVORNET_STATUS_INVALID_DECISION = 8,
  FAVORNET_STATUS_BUFFER_TOO_SMALL = 9,
  FAVORNET_STATUS_GAME_NOT_OVER = 10,
  FAVORNET_STATUS_PANIC = 98,
  FAVORNET_STATUS_INTERNAL = 99,
} FavornetStatus;

typedef enum FavornetAction {
  FAVORNET_ACTION_KEEP = 0,
  FAVORNET_ACTION_DELETE = 1,
} FavornetAction;

// Opaque game handle.
typedef struct FavornetGame FavornetGame;

// Opaque network handle.
typedef struct FavornetGraph FavornetGraph;

// `cc` is -1 when the network is not TC.
typedef struct FavornetClassification {
  bool is_rpe;
  int32_t cc;
  bool is_lcc;
  bool is_social_quilt;
  bool is_simple_cycle;
} FavornetClassification;

// A keep, or the deletion of link (i, j). `i` and `j` are ignored for keeps.
typedef struct FavornetDecision {
  enum FavornetAction action;
  uint32_t i;
  uint32_t j;
} FavornetDecision;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *favornet_last_error_message(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must come from this library and not have been freed.
void favornet_string_free(char *s);

// Builds a network on `n` nodes from `edge_count` pairs stored flat in
// `edges` as i0, j0, i1, j1, ...
//
// # Safety
// `edges` must point to `2 * edge_count` readable values (or may be NULL
// when `edge_count` is 0); `out_graph` must be writable.
enum FavornetStatus favornet_graph_new(size_t n,
                                       const uint32_t *edges,
                                       size_t edge_count,
                                       struct FavornetGraph **out_graph);

// Looks up a catalog network by name, e.g. "2R3".
//
// # Safety
// `name` must be a NUL-terminated string; `out_graph` must be writable.
enum FavornetStatus favornet_graph_from_catalog(const char *name, struct FavornetGraph **out_graph);

// # Safety
// `graph` must come from this library and not have been freed. NULL is ignored.
void favornet_graph_free(struct FavornetGraph *graph);

// Number of nodes, or 0 for NULL.
//
// # Safety
// `graph` must be a live handle or NULL.
size_t favornet_graph_node_count(const struct FavornetGraph *graph);

// Number of links, or 0 for NULL.
//
// # Safety
// `graph` must be a live handle or NULL.
size_t favornet_graph_edge_count(const struct FavornetGraph *graph);

// Copies links into `buf` as flat pairs. `capacity` counts pairs.
// `*written` receives the link count even when the buffer is too small.
//
// # Safety
// `buf` must hold `2 * capacity` values; `written` must be writable.
enum FavornetStatus favornet_graph_edges(const struct FavornetGraph *graph,
                                         uint32_t *buf,
                                         size_t capacity,
                                         size_t *written);

// Classifies a network for favor-cost multiple `m`.
//
// # Safety
// `graph` must be a live handle; `result` must be writable.
enum FavornetStatus favornet_classify(const struct FavornetGraph *graph,
                                      uint32_t m,
                                      struct FavornetClassification *result);

// Cognitive complexity; fails with `NotTc` for non-TC networks.
//
// # Safety
// `graph` must be a live handle; `cc` must be writable.
enum FavornetStatus favornet_cc(const struct FavornetGraph *graph, uint32_t m, uint32_t *cc);

// The equilibrium decision for node `me` facing `graph`.
//
// # Safety
// `graph` must be a live handle; `decision` must be writable.
enum FavornetStatus favornet_equilibrium_decision(const struct FavornetGraph *graph,
                                                  uint32_t me,
                                                  uint32_t m,
                                                  struct FavornetDecision *decision);

// Starts a game on a copy of `graph` with payoffs `b` per surviving link
// and `c` per own deletion. Requires 2b > c > b.
//
// # Safety
// `graph` must be a live handle; `out_game` must be writable.
enum FavornetStatus favornet_game_new(const struct FavornetGraph *graph,
                                      int64_t b,
                                      int64_t c,
                                      uint64_t seed,
                                      struct FavornetGame **out_game);

// # Safety
// `game` must come from this library and not have been freed. NULL is ignored.
void favornet_game_free(struct FavornetGame *game);

// # Safety
// `game` must be a live handle; `terminal` must be writable.
enum FavornetStatus favornet_game_is_terminal(const struct FavornetGame *game, bool *terminal);

// Node whose turn it is; fails with `GameOver` once terminal.
//
// # Safety
// `game` must be a live handle; `player` must be writable.
enum FavornetStatus favornet_game_next_player(const struct FavornetGame *game, uint32_t *player);

// Applies `decision` for `player`, who must be the node on turn.
//
// # Safety
// `game` must be a live handle; `decision` must be readable.
enum FavornetStatus favornet_game_apply(struct FavornetGame *game,
                                        uint32_t player,
                                        const struct FavornetDecision *decision);

// Copies the current network into a new handle.
//
// # Safety
// `game` must be a live handle; `out_graph` must be writable.
enum FavornetStatus favornet_game_graph(const struct FavornetGame *game,
                                        struct FavornetGraph **out_graph);

// Final payoffs, one per node. `capacity` must be at least the node count.
//
// # Safety
// `game` must be a live handle; `buf` must hold `capacity` values.
enum FavornetStatus favornet_game_payoffs(const struct FavornetGame *game,
                                          int64_t *buf,
                                          size_t capacity);

// Hex SHA-256 of the trace so far. Free with [`favornet_string_free`].
//
// # Safety
// `game` must be a live handle; `hash` must be writable.
enum FavornetStatus favornet_game_trace_hash(const struct FavornetGame *game, char **hash);

// Trace as JSON lines, one event per line. Free with [`favornet_string_free`].
//
// # Safety
// `game` must be a live handle; `jsonl` must be writable.
enum FavornetStatus favornet_game_trace_jsonl(const struct FavornetGame *game, char **jsonl);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FAVORNET_H */
