#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliquedec/hosts.hpp"
#include "cliquedec/lp.hpp"
#include "cliquedec/patterns.hpp"

namespace cliquedec {

class DecompError : public std::runtime_error {
 public:
  explicit DecompError(const std::string& what) : std::runtime_error(what) {}
};

/// Host admits no fractional K_k-decomposition.
class InfeasibleHostError : public DecompError {
 public:
  explicit InfeasibleHostError(const std::string& what) : DecompError(what) {}
};

/// k-subsets of the host all of whose pairs are present, ascending
/// lexicographic order.
inline std::vector<std::vector<int>> k_subsets(const Host& h, int k) {
  if (k < 2 || k > h.n) return {};
  std::vector<std::vector<int>> out;
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  for (;;) {
    bool ok = true;
    for (int a = 0; a < k && ok; ++a)
      for (int b = a + 1; b < k && ok; ++b) ok = h.present(pick[a], pick[b]);
    if (ok) out.push_back(pick);
    int i = k - 1;
    while (i >= 0 && pick[i] == h.n - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

/// Isomorphism class of the labelled k-subset (positions keep the subset's
/// ascending vertex order).
inline Pattern pattern_of_subset(const Host& h, const std::vector<int>& subset) {
  const int k = static_cast<int>(subset.size());
  std::vector<std::uint8_t> raw(pair_count(k));
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      std::int8_t l = h.pairs[pair_index(subset[a], subset[b], h.n)];
      if (l == kAbsent) throw DecompError("subset has an absent pair");
      raw[pair_index(a, b, k)] = static_cast<std::uint8_t>(l);
    }
  return canonical_pattern(k, h.kind, raw);
}

/// Weights on the K_k-subsets of a host. `packing` marks per-pair sums
/// constrained to <= 1 instead of == 1.
struct FractionalDecomposition {
  Host host;
  int k = 3;
  std::vector<std::vector<int>> subsets;
  std::vector<Rat> weights;
  bool packing = false;
};

/// Exact validity check of the defining per-pair identities.
inline bool check_decomposition(const FractionalDecomposition& f) {
  std::vector<Rat> per_pair(pair_count(f.host.n), Rat(0));
  for (std::size_t s = 0; s < f.subsets.size(); ++s) {
    if (f.weights[s] < 0 || f.weights[s] > 1) return false;
    const auto& sub = f.subsets[s];
    for (std::size_t a = 0; a < sub.size(); ++a)
      for (std::size_t b = a + 1; b < sub.size(); ++b)
        per_pair[pair_index(sub[a], sub[b], f.host.n)] += f.weights[s];
  }
  for (int i = 0; i < f.host.n; ++i)
    for (int j = i + 1; j < f.host.n; ++j) {
      const Rat& got = per_pair[pair_index(i, j, f.host.n)];
      if (!f.host.present(i, j)) {
        if (got != 0) return false;
      } else if (f.packing ? (got > 1) : (got != 1)) {
        return false;
      }
    }
  return true;
}

namespace detail {

inline void require_vector_match(const Host& h, int k, const WeightVector& v) {
  if (!v.catalog) throw DecompError("weight vector has no catalog");
  if (v.catalog->order != k)
    throw DecompError("weight vector is indexed by order " + std::to_string(v.catalog->order) +
                      ", not k=" + std::to_string(k));
  if (!(v.catalog->kind == h.kind))
    throw DecompError("weight vector kind " + v.catalog->kind.describe() +
                      " does not match host kind " + h.kind.describe());
}

inline std::string subset_name(const std::vector<int>& s) {
  std::string out = "X{";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "." : "") + std::to_string(s[i]);
  return out + "}";
}

}  // namespace detail

/// One variable per K_k-subset, one row per present pair with rhs 1, and
/// objective coefficient v_{pattern(X)}. A present pair lying in no
/// k-subset makes the program infeasible by construction and is reported
/// before any solving.
inline LpProblem build_decomposition_lp(const Host& h, int k, const WeightVector& v,
                                        bool packing = false) {
  detail::require_vector_match(h, k, v);
  auto subsets = k_subsets(h, k);

  std::vector<int> row_of(pair_count(h.n), -1);
  std::vector<std::pair<int, int>> rows;
  for (int i = 0; i < h.n; ++i)
    for (int j = i + 1; j < h.n; ++j)
      if (h.present(i, j)) {
        row_of[pair_index(i, j, h.n)] = static_cast<int>(rows.size());
        rows.emplace_back(i, j);
      }
  if (rows.empty()) throw DecompError("host has no present pairs");

  std::vector<char> covered(rows.size(), 0);
  for (const auto& sub : subsets)
    for (std::size_t a = 0; a < sub.size(); ++a)
      for (std::size_t b = a + 1; b < sub.size(); ++b)
        covered[row_of[pair_index(sub[a], sub[b], h.n)]] = 1;
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (!covered[r] && !packing)
      throw InfeasibleHostError("pair {" + std::to_string(rows[r].first) + "," +
                                std::to_string(rows[r].second) +
                                "} lies in no K_" + std::to_string(k) + "-subset of " +
                                h.provenance);

  const std::size_t nsub = subsets.size();
  const std::size_t cols = nsub + (packing ? rows.size() : 0);
  LpProblem p = LpProblem::zeros(rows.size(), cols);
  p.var_names.reserve(cols);
  for (std::size_t s = 0; s < nsub; ++s) {
    p.var_names.push_back(detail::subset_name(subsets[s]));
    p.c[s] = v[v.catalog->index_of(pattern_of_subset(h, subsets[s]).id)];
    for (std::size_t a = 0; a < subsets[s].size(); ++a)
      for (std::size_t b = a + 1; b < subsets[s].size(); ++b)
        p.at(row_of[pair_index(subsets[s][a], subsets[s][b], h.n)], s) = 1;
  }
  p.row_names.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    p.row_names.push_back("e{" + std::to_string(rows[r].first) + "," +
                          std::to_string(rows[r].second) + "}");
    p.b[r] = 1;
    if (packing) {
      p.at(r, nsub + r) = 1;  // slack
      p.var_names.push_back("s" + p.row_names.back());
    }
  }
  return p;
}

struct DstarResult {
  Rat value;
  FractionalDecomposition decomposition;
  LpSolution lp;
};

/// Exact optimum D*_v(G) with a verified certificate and the optimal f.
inline DstarResult dstar(const Host& h, int k, const WeightVector& v) {
  LpProblem p = build_decomposition_lp(h, k, v);
  LpSolution sol = solve(p);
  if (sol.status == LpStatus::infeasible)
    throw InfeasibleHostError("no fractional K_" + std::to_string(k) + "-decomposition of " +
                              h.provenance);
  if (sol.status != LpStatus::optimal)
    throw DecompError("decomposition LP unexpectedly " + std::string(to_string(sol.status)));
  if (!verify_certificate(p, sol))
    throw DecompError("optimality certificate failed verification on " + h.provenance);

  DstarResult out;
  out.value = sol.value;
  out.decomposition.host = h;
  out.decomposition.k = k;
  out.decomposition.subsets = k_subsets(h, k);
  out.decomposition.weights.assign(sol.x.begin(), sol.x.begin() + out.decomposition.subsets.size());
  out.lp = std::move(sol);
  return out;
}

/// nu*_v(G) = D*_v(G) * C(k,2) / |E(G)|. When `infeasible_as_zero` is set,
/// an infeasible host reports 0 instead of raising.
inline Rat nustar(const Host& h, int k, const WeightVector& v, bool infeasible_as_zero = false) {
  if (h.edge_count() == 0) throw DecompError("nustar needs at least one present pair");
  try {
    Rat d = dstar(h, k, v).value;
    return d * Rat(pair_count(k)) / Rat(h.edge_count());
  } catch (const InfeasibleHostError&) {
    if (infeasible_as_zero) return Rat(0);
    throw;
  }
}

/// Total weight landing on each pattern class: f(G,H) keyed by pattern id.
inline std::map<std::string, Rat> pattern_mass(const FractionalDecomposition& f) {
  std::map<std::string, Rat> mass;
  for (std::size_t s = 0; s < f.subsets.size(); ++s) {
    if (f.weights[s] == 0) continue;
    mass[pattern_of_subset(f.host, f.subsets[s]).id] += f.weights[s];
  }
  return mass;
}

/// The averaging decomposition on a complete host: every k-subset gets
/// 1 / C(n-2, k-2), so each pair's incident weight sums to exactly 1.
inline FractionalDecomposition uniform_decomposition(const Host& h, int k = 3) {
  if (!h.complete()) throw DecompError("uniform decomposition needs a complete host");
  if (h.n < k) throw DecompError("host smaller than k");
  Int per_pair = 1;  // C(n-2, k-2)
  for (int i = 0; i < k - 2; ++i) per_pair = per_pair * (h.n - 2 - i) / (i + 1);
  FractionalDecomposition f;
  f.host = h;
  f.k = k;
  f.subsets = k_subsets(h, k);
  f.weights.assign(f.subsets.size(), Rat(1) / Rat(per_pair));
  return f;
}

/// k-divisibility: k-1 | n-1 and C(k,2) | C(n,2).
inline bool divisible(long long n, long long k) {
  if (n < 1 || k < 3) throw DecompError("divisible expects n >= 1, k >= 3");
  long long pairs_n = n * (n - 1) / 2, pairs_k = k * (k - 1) / 2;
  return (n - 1) % (k - 1) == 0 && pairs_n % pairs_k == 0;
}

/// The limit bound propagated from one order: (value*(r-1) + 1) / r.
inline Rat asymptotic_bound(long long r, const Rat& value) {
  if (r < 3) throw DecompError("asymptotic_bound expects r >= 3");
  if (value < 0 || value > 1) throw DecompError("asymptotic_bound expects value in [0,1]");
  return (value * Rat(r - 1) + 1) / Rat(r);
}

/// Lower bound on D*(G) from vertex-deleted subhosts: averaging their
/// optimal decompositions gives a feasible f of G with this value, so the
/// bound never exceeds dstar(G).
inline Rat deletion_average_bound(const Host& h, int k, const WeightVector& v) {
  if (h.n < k + 1) throw DecompError("deletion bound needs n >= k+1");
  Rat sum = 0;
  for (int drop = 0; drop < h.n; ++drop) sum += dstar(delete_vertex(h, drop), k, v).value;
  return sum / Rat(h.n - 2);
}

// ---------------------------------------------------------------------------
// Exact integer optimum by branch and bound over pair-set partitions.

struct IntegerOptimum {
  Rat value;                            // nu_v of the best decomposition
  std::vector<std::vector<int>> blocks;  // the k-subsets achieving it
};

namespace detail {

struct IntOptSearch {
  int k = 3;
  std::size_t pairs = 0;
  std::vector<std::uint64_t> block_mask;
  std::vector<Rat> block_weight;
  std::vector<std::vector<int>> by_first_pair;  // candidate blocks per pair, weight-descending
  Rat wmax;
  std::uint64_t full_mask = 0;
  std::size_t block_size_pairs = 0;

  Rat best;
  bool have_best = false;
  std::vector<int> current, best_blocks;

  void rec(std::uint64_t covered, const Rat& acc) {
    if (covered == full_mask) {
      if (!have_best || acc > best) {
        best = acc;
        best_blocks = current;
        have_best = true;
      }
      return;
    }
    // optimistic completion: every remaining block at the best weight
    std::uint64_t remaining = (pairs - std::uint64_t(__builtin_popcountll(covered))) /
                              block_size_pairs;
    if (have_best && acc + Rat(remaining) * wmax <= best) return;
    int first_uncovered = __builtin_ctzll(~covered);
    for (int bidx : by_first_pair[first_uncovered]) {
      if (block_mask[bidx] & covered) continue;
      current.push_back(bidx);
      rec(covered | block_mask[bidx], acc + block_weight[bidx]);
      current.pop_back();
    }
  }
};

}  // namespace detail

/// Maximum of nu_v(L) over all partitions L of the pair set into k-subsets.
/// Branches on the lexicographically first uncovered pair, candidates in
/// descending v-weight order, with an optimistic-weight bound.
inline IntegerOptimum integer_optimum(const Host& h, int k, const WeightVector& v) {
  detail::require_vector_match(h, k, v);
  if (!h.complete()) throw DecompError("integer optimum needs a complete host");
  if (!divisible(h.n, k))
    throw DecompError("K_" + std::to_string(h.n) + " is not " + std::to_string(k) +
                      "-decomposable");
  if (h.n < k) throw DecompError("host smaller than k");
  if (k == 3 ? h.n > 9 : pair_count(h.n) > 64)
    throw DecompError("integer optimum resource cap exceeded at n=" + std::to_string(h.n));

  detail::IntOptSearch s;
  s.k = k;
  s.pairs = pair_count(h.n);
  s.block_size_pairs = pair_count(k);
  s.full_mask = s.pairs == 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << s.pairs) - 1);

  auto subsets = k_subsets(h, k);
  s.block_mask.reserve(subsets.size());
  s.block_weight.reserve(subsets.size());
  for (const auto& sub : subsets) {
    std::uint64_t mask = 0;
    for (std::size_t a = 0; a < sub.size(); ++a)
      for (std::size_t b = a + 1; b < sub.size(); ++b)
        mask |= std::uint64_t(1) << pair_index(sub[a], sub[b], h.n);
    s.block_mask.push_back(mask);
    s.block_weight.push_back(v[v.catalog->index_of(pattern_of_subset(h, sub).id)]);
  }
  s.wmax = *std::max_element(s.block_weight.begin(), s.block_weight.end());

  s.by_first_pair.assign(s.pairs, {});
  for (std::size_t b = 0; b < subsets.size(); ++b) {
    int first = __builtin_ctzll(s.block_mask[b]);
    s.by_first_pair[first].push_back(static_cast<int>(b));
  }
  for (auto& cands : s.by_first_pair)
    std::stable_sort(cands.begin(), cands.end(), [&](int x, int y) {
      return s.block_weight[x] > s.block_weight[y];
    });

  s.rec(0, Rat(0));
  if (!s.have_best) throw DecompError("no partition of the pair set into K_" + std::to_string(k) +
                                      "-subsets exists");

  IntegerOptimum out;
  const Rat block_count = Rat(s.pairs) / Rat(s.block_size_pairs);
  out.value = s.best / block_count;
  for (int bidx : s.best_blocks) out.blocks.push_back(subsets[bidx]);
  return out;
}

// ---------------------------------------------------------------------------
// The two-constraint random-graph program.

struct RandomGraphProgram {
  LpProblem lp;
  Rat optimum;          // s(v, p)
  std::vector<Rat> x;   // optimal point, catalog order
};

/// LP(v,p): maximize v'x subject to
///   sum_H (e(H) - p*C(k,2)) x_H = 0,  sum_H x_H = 1,  x >= 0.
/// Always feasible: x_{K_k} = p, x_{I_k} = 1-p.
inline RandomGraphProgram random_graph_lp(int k, const WeightVector& v, const Rat& p) {
  if (!v.catalog || !(v.catalog->kind == LabelKind::binary_kind()) || v.catalog->order != k)
    throw DecompError("random-graph LP needs a vector over the binary catalog of order k");
  if (p < 0 || p > 1) throw DecompError("edge probability must be in [0,1]");

  const auto& cat = *v.catalog;
  const Rat kpairs = Rat(pair_count(k));
  LpProblem lp = LpProblem::zeros(2, cat.size());
  for (std::size_t j = 0; j < cat.size(); ++j) {
    lp.at(0, j) = Rat(label_count(cat.patterns[j], 1)) - p * kpairs;
    lp.at(1, j) = 1;
    lp.c[j] = v[j];
    lp.var_names.push_back("x#" + std::to_string(j));
  }
  lp.b[0] = 0;
  lp.b[1] = 1;
  lp.row_names = {"edge-density", "total-mass"};

  LpSolution sol = solve(lp);
  if (sol.status != LpStatus::optimal || !verify_certificate(lp, sol))
    throw DecompError("LP(v,p) did not produce a verified optimum");
  RandomGraphProgram out;
  out.optimum = sol.value;
  out.x = sol.x;
  out.lp = std::move(lp);
  return out;
}

/// Checks that the canonical witness x_{K_k} = p, x_{I_k} = 1-p satisfies
/// LP(v,p)'s constraints exactly.
inline bool random_graph_witness_feasible(int k, const WeightVector& v, const Rat& p) {
  RandomGraphProgram prog = random_graph_lp(k, v, p);
  const std::size_t m = pair_count(k);
  int kk = v.catalog->index_of(std::string(m, char(1)));
  int ik = v.catalog->index_of(std::string(m, char(0)));
  if (kk < 0 || ik < 0) return false;
  std::vector<Rat> x(v.catalog->size(), Rat(0));
  x[kk] = p;
  x[ik] = 1 - p;
  for (std::size_t r = 0; r < prog.lp.rows; ++r) {
    Rat ax = 0;
    for (std::size_t j = 0; j < prog.lp.cols; ++j) ax += prog.lp.at(r, j) * x[j];
    if (ax != prog.lp.b[r]) return false;
  }
  return true;
}

}  // namespace cliquedec
