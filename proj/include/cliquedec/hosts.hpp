#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliquedec/patterns.hpp"
#include "cliquedec/rng.hpp"

namespace cliquedec {

class HostError : public std::runtime_error {
 public:
  explicit HostError(const std::string& what) : std::runtime_error(what) {}
};

constexpr std::int8_t kAbsent = -1;

/// An n-vertex pair-labelled object: tournament, graph-as-bicoloring, or
/// C-colored complete graph. Pairs may be absent. Immutable by convention
/// once built; every constructor stamps a provenance string.
struct Host {
  int n = 0;
  LabelKind kind;
  std::vector<std::int8_t> pairs;  // row-major upper triangle; kAbsent allowed
  std::string provenance;

  std::int8_t raw(int i, int j) const {
    return pairs[i < j ? pair_index(i, j, n) : pair_index(j, i, n)];
  }
  bool present(int i, int j) const { return raw(i, j) != kAbsent; }

  /// Oriented kinds only: 1 iff i beats j.
  int oriented_label(int i, int j) const {
    std::int8_t l = pairs[i < j ? pair_index(i, j, n) : pair_index(j, i, n)];
    if (l == kAbsent) throw HostError("absent pair queried for orientation");
    return i < j ? l : 1 - l;
  }

  std::size_t edge_count() const {
    return pairs.size() - std::count(pairs.begin(), pairs.end(), kAbsent);
  }
  bool complete() const {
    return std::none_of(pairs.begin(), pairs.end(), [](std::int8_t l) { return l == kAbsent; });
  }
  bool is_tournament() const { return kind.pair == PairKind::oriented && complete(); }
};

inline Host make_host(int n, const LabelKind& kind, std::string provenance) {
  if (n < 1) throw HostError("host needs at least one vertex");
  Host h;
  h.n = n;
  h.kind = kind;
  h.pairs.assign(pair_count(n), kAbsent);
  h.provenance = std::move(provenance);
  return h;
}

/// Builds a tournament from explicit arcs. Every pair must be oriented
/// exactly once.
inline Host tournament_from_pairs(int n, const std::vector<std::pair<int, int>>& arcs) {
  Host h = make_host(n, LabelKind::oriented_kind(), "arcs(n=" + std::to_string(n) + ")");
  for (auto [from, to] : arcs) {
    if (from == to || from < 0 || to < 0 || from >= n || to >= n)
      throw HostError("bad arc endpoint");
    std::size_t idx = from < to ? pair_index(from, to, n) : pair_index(to, from, n);
    std::int8_t want = from < to ? 1 : 0;
    if (h.pairs[idx] != kAbsent) throw HostError("pair oriented twice");
    h.pairs[idx] = want;
  }
  for (auto l : h.pairs)
    if (l == kAbsent) throw HostError("missing pair orientation");
  return h;
}

/// Adds vertex r = t.n to a tournament; bit i of mask set means the new
/// vertex beats vertex i. extend(t, m1) == extend(t, m2) iff m1 == m2.
inline Host extend(const Host& t, std::uint64_t mask) {
  if (!t.is_tournament()) throw HostError("extend requires a tournament");
  if (t.n >= 63 || mask >= (std::uint64_t(1) << t.n)) throw HostError("extension mask out of range");
  const int r = t.n;
  Host h = make_host(r + 1, t.kind, t.provenance + "+ext(" + std::to_string(mask) + ")");
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) h.pairs[pair_index(i, j, r + 1)] = t.pairs[pair_index(i, j, r)];
  for (int i = 0; i < r; ++i)
    h.pairs[pair_index(i, r, r + 1)] = ((mask >> i) & 1) ? 0 : 1;  // new beats i  =>  not(i->new)
  return h;
}

/// Removes vertex v; remaining vertices keep their relative order.
inline Host delete_vertex(const Host& h, int v) {
  if (h.n < 2) throw HostError("cannot delete from a single-vertex host");
  if (v < 0 || v >= h.n) throw HostError("vertex out of range");
  Host out = make_host(h.n - 1, h.kind, h.provenance + "-v" + std::to_string(v));
  for (int i = 0; i < h.n; ++i) {
    if (i == v) continue;
    for (int j = i + 1; j < h.n; ++j) {
      if (j == v) continue;
      int ni = i - (i > v), nj = j - (j > v);
      out.pairs[pair_index(ni, nj, out.n)] = h.pairs[pair_index(i, j, h.n)];
    }
  }
  return out;
}

enum class InnerOrientation { transitive, seeded_random };

struct BlowupSpec {
  std::vector<int> parts;  // positive sizes
  InnerOrientation inner = InnerOrientation::transitive;
  std::uint64_t seed = 0;  // seeded_random only
};

/// Cyclic blow-up tournament: part i sends all its edges to part i+1 (mod m).
/// With more than three parts, a pair of non-adjacent parts is oriented
/// toward the cyclically nearer one; at equal distance (even m, opposite
/// parts) the lower-indexed part wins. Inside a part the orientation is
/// transitive by vertex index, or seeded-random on request.
inline Host blowup_cyclic(const BlowupSpec& spec) {
  if (spec.parts.empty()) throw HostError("blow-up needs at least one part");
  for (int a : spec.parts)
    if (a <= 0) throw HostError("blow-up parts must be positive");
  const int m = static_cast<int>(spec.parts.size());
  const int n = std::accumulate(spec.parts.begin(), spec.parts.end(), 0);

  std::string name = "blowup([";
  for (int i = 0; i < m; ++i) name += (i ? "," : "") + std::to_string(spec.parts[i]);
  name += spec.inner == InnerOrientation::transitive
              ? "],transitive)"
              : "],seed=" + std::to_string(spec.seed) + ")";

  std::vector<int> part_of(n);
  for (int p = 0, v = 0; p < m; ++p)
    for (int i = 0; i < spec.parts[p]; ++i) part_of[v++] = p;

  SplitMix64 rng(spec.seed);
  Host h = make_host(n, LabelKind::oriented_kind(), name);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int pi = part_of[i], pj = part_of[j];
      std::int8_t label;
      if (pi == pj) {
        label = spec.inner == InnerOrientation::transitive
                    ? 1
                    : static_cast<std::int8_t>(rng.next() & 1);
      } else {
        int fwd = ((pj - pi) % m + m) % m;  // i's part -> j's part distance
        int bwd = m - fwd;
        label = (fwd < bwd || (fwd == bwd && pi < pj)) ? 1 : 0;
      }
      h.pairs[pair_index(i, j, n)] = label;
    }
  }
  return h;
}

/// Blue/red coloring of K_n from a simple graph: edges blue, non-edges red.
inline Host graph_to_bicolored(int n, const std::vector<std::pair<int, int>>& edges) {
  Host h = make_host(n, LabelKind::colored_kind({"blue", "red"}),
                     "bicolored(n=" + std::to_string(n) + ")");
  std::fill(h.pairs.begin(), h.pairs.end(), 1);  // red
  for (auto [a, b] : edges) {
    if (a == b) throw HostError("loop edge");
    if (a < 0 || b < 0 || a >= n || b >= n) throw HostError("edge endpoint out of range");
    std::size_t idx = a < b ? pair_index(a, b, n) : pair_index(b, a, n);
    if (h.pairs[idx] == 0) throw HostError("multi-edge");
    h.pairs[idx] = 0;  // blue
  }
  return h;
}

/// blue <-> edge bridge between the two-color palette and the binary kind.
inline Host bicolored_to_binary(const Host& h) {
  if (h.kind.pair != PairKind::colored || h.kind.states() != 2)
    throw HostError("expected a two-color host");
  Host out = h;
  out.kind = LabelKind::binary_kind();
  for (auto& l : out.pairs)
    if (l != kAbsent) l = static_cast<std::int8_t>(l == 0 ? 1 : 0);
  out.provenance += "|as-binary";
  return out;
}

/// Independently labels every pair from a SplitMix64 stream in pair-index
/// order. Binary: label 1 with exact probability p. Oriented: one fair bit.
/// Colored: floor(u * palette / 2^64).
inline Host random_host(const LabelKind& kind, int n, const Rat& p, std::uint64_t seed) {
  if (kind.pair == PairKind::binary && (p < 0 || p > 1))
    throw HostError("edge probability must be in [0,1]");
  Host h = make_host(n, kind,
                     "random(" + kind.describe() + ",n=" + std::to_string(n) + ",p=" + to_pq(p) +
                         ",seed=" + std::to_string(seed) + ")");
  SplitMix64 rng(seed);
  const Int num = numerator(p), den = denominator(p);
  for (auto& l : h.pairs) {
    std::uint64_t u = rng.next();
    switch (kind.pair) {
      case PairKind::binary: {
        // u/2^64 < p  <=>  u*den < num*2^64, exactly
        Int lhs = Int(u) * den;
        Int rhs = num << 64;
        l = lhs < rhs ? 1 : 0;
        break;
      }
      case PairKind::oriented:
        l = static_cast<std::int8_t>(u & 1);
        break;
      case PairKind::colored:
        l = static_cast<std::int8_t>((static_cast<unsigned __int128>(u) * kind.states()) >> 64);
        break;
    }
  }
  return h;
}

inline Host random_tournament(int n, std::uint64_t seed) {
  return random_host(LabelKind::oriented_kind(), n, Rat(1, 2), seed);
}

// ---------------------------------------------------------------------------
// Canonical forms

namespace detail {

/// Per-vertex invariant: counts of incident labels, viewed from the vertex
/// (oriented pairs split into out/in). Isomorphism-invariant, so it may be
/// serialized ahead of the pair table without changing the equivalence.
inline std::vector<std::uint8_t> vertex_invariant(const Host& h, int v) {
  const int states = h.kind.states();
  const bool oriented = h.kind.pair == PairKind::oriented;
  std::vector<std::uint8_t> inv(oriented ? 3 : states + 1, 0);
  for (int u = 0; u < h.n; ++u) {
    if (u == v) continue;
    std::int8_t l = h.raw(v, u);
    if (l == kAbsent) {
      ++inv.back();
    } else if (oriented) {
      ++inv[h.oriented_label(v, u) == 1 ? 0 : 1];
    } else {
      ++inv[l];
    }
  }
  return inv;
}

struct CanonicalSearch {
  const Host& h;
  std::vector<std::vector<std::uint8_t>> inv;  // per-vertex invariant
  std::string best;
  std::vector<int> chosen;
  std::vector<char> used;

  explicit CanonicalSearch(const Host& host) : h(host), used(host.n, 0) {
    inv.reserve(h.n);
    for (int v = 0; v < h.n; ++v) inv.push_back(vertex_invariant(h, v));
  }

  /// Bytes contributed by placing `v` at position `depth`: its invariant,
  /// then its labels toward the already-placed vertices.
  std::string segment(int v, int depth) const {
    std::string s(inv[v].begin(), inv[v].end());
    for (int i = 0; i < depth; ++i) {
      int u = chosen[i];
      std::int8_t l = h.raw(u, v);
      if (l == kAbsent) {
        s.push_back(0);
      } else if (h.kind.pair == PairKind::oriented) {
        s.push_back(static_cast<char>(h.oriented_label(u, v) + 1));
      } else {
        s.push_back(static_cast<char>(l + 1));
      }
    }
    return s;
  }

  /// True when u and v are interchangeable by the transposition (u v).
  bool twins(int u, int v) const {
    if (h.kind.pair == PairKind::oriented) return false;  // the u-v pair flips
    for (int x = 0; x < h.n; ++x) {
      if (x == u || x == v) continue;
      if (h.raw(u, x) != h.raw(v, x)) return false;
    }
    return true;
  }

  void rec(int depth, std::string& acc) {
    if (depth == h.n) {
      if (best.empty() || acc < best) best = acc;
      return;
    }
    // Only children achieving the minimal next segment can contain the
    // lexicographic minimum.
    std::string min_seg;
    std::vector<int> cands;
    for (int v = 0; v < h.n; ++v) {
      if (used[v]) continue;
      std::string s = segment(v, depth);
      if (cands.empty() || s < min_seg) {
        min_seg = std::move(s);
        cands.assign(1, v);
      } else if (s == min_seg) {
        cands.push_back(v);
      }
    }
    // Twin candidates generate identical subtrees; keep one.
    std::vector<int> pruned;
    for (int v : cands) {
      bool dup = false;
      for (int u : pruned) dup = dup || twins(u, v);
      if (!dup) pruned.push_back(v);
    }
    const std::size_t before = acc.size();
    acc += min_seg;
    for (int v : pruned) {
      chosen[depth] = v;
      used[v] = 1;
      rec(depth + 1, acc);
      used[v] = 0;
    }
    acc.resize(before);
  }
};

}  // namespace detail

/// Canonical byte string: kind tag, state count, n, then for each vertex
/// position its invariant and its labels toward earlier positions, minimized
/// lexicographically over all vertex orders. Equal iff isomorphic.
inline std::string canonical_form(const Host& h, int cap = 12) {
  if (h.n > cap)
    throw HostError("canonical_form cap exceeded (n=" + std::to_string(h.n) + " > " +
                    std::to_string(cap) + ")");
  detail::CanonicalSearch search(h);
  search.chosen.assign(h.n, -1);
  std::string acc;
  std::string header;
  header.push_back(static_cast<char>(h.kind.pair));
  header.push_back(static_cast<char>(h.kind.states()));
  header.push_back(static_cast<char>(h.n));
  search.rec(0, acc);
  return header + search.best;
}

/// One representative per isomorphism class, in canonical-form order.
/// Level-wise extension with canonical dedup, starting from the one-vertex
/// tournament.
inline std::vector<Host> enumerate_nonisomorphic_tournaments(int n, int cap = 8) {
  if (n < 1) throw HostError("order must be positive");
  if (n > cap)
    throw HostError("enumeration cap exceeded (n=" + std::to_string(n) + " > " +
                    std::to_string(cap) + ")");
  std::vector<Host> reps;
  reps.push_back(make_host(1, LabelKind::oriented_kind(), "enum(1)"));
  for (int r = 1; r < n; ++r) {
    std::map<std::string, Host> seen;
    for (const Host& t : reps) {
      for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << r); ++mask) {
        Host e = extend(t, mask);
        std::string form = canonical_form(e, cap + 1);
        seen.try_emplace(std::move(form), std::move(e));
      }
    }
    reps.clear();
    int idx = 0;
    for (auto& [form, host] : seen) {
      host.provenance = "enum(" + std::to_string(r + 1) + ")[" + std::to_string(idx++) + "]";
      reps.push_back(std::move(host));
    }
  }
  return reps;
}

// ---------------------------------------------------------------------------
// Packed tournaments: the search frontier representation.

/// Tournament on up to 16 vertices packed into 128 bits, column-major upper
/// triangle (pair (i,j), i<j, at bit C(j,2)+i; bit 1 means i beats j).
/// Column-major makes one-vertex extension a shift-or.
struct PackedTournament {
  std::uint64_t lo = 0, hi = 0;

  static std::size_t bit_index(int i, int j) {  // i < j
    return static_cast<std::size_t>(j) * (j - 1) / 2 + i;
  }
  int bit(std::size_t idx) const {
    return idx < 64 ? (lo >> idx) & 1 : (hi >> (idx - 64)) & 1;
  }
  void set_bit(std::size_t idx) {
    if (idx < 64) lo |= std::uint64_t(1) << idx;
    else hi |= std::uint64_t(1) << (idx - 64);
  }
  int beats(int i, int j) const {  // 1 iff i beats j
    return i < j ? bit(bit_index(i, j)) : 1 - bit(bit_index(j, i));
  }
  bool operator==(const PackedTournament&) const = default;
  auto operator<=>(const PackedTournament&) const = default;
};

inline PackedTournament pack_tournament(const Host& t) {
  if (!t.is_tournament()) throw HostError("packing requires a tournament");
  if (t.n > 16) throw HostError("packed tournaments support up to 16 vertices");
  PackedTournament p;
  for (int i = 0; i < t.n; ++i)
    for (int j = i + 1; j < t.n; ++j)
      if (t.pairs[pair_index(i, j, t.n)] == 1) p.set_bit(PackedTournament::bit_index(i, j));
  return p;
}

inline Host unpack_tournament(const PackedTournament& p, int n, std::string provenance) {
  Host h = make_host(n, LabelKind::oriented_kind(), std::move(provenance));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      h.pairs[pair_index(i, j, n)] =
          static_cast<std::int8_t>(p.bit(PackedTournament::bit_index(i, j)));
  return h;
}

/// Packed counterpart of extend(): order r -> r+1, new pairs occupy bits
/// [C(r,2), C(r+1,2)).
inline PackedTournament packed_extend(const PackedTournament& t, int order, std::uint64_t mask) {
  unsigned __int128 bits = (static_cast<unsigned __int128>(t.hi) << 64) | t.lo;
  std::uint64_t incoming = (~mask) & ((std::uint64_t(1) << order) - 1);  // i->new bits
  bits |= static_cast<unsigned __int128>(incoming) << (order * (order - 1) / 2);
  PackedTournament out;
  out.lo = static_cast<std::uint64_t>(bits);
  out.hi = static_cast<std::uint64_t>(bits >> 64);
  return out;
}

}  // namespace cliquedec
