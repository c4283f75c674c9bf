#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cliquedec/hash.hpp"
#include "cliquedec/rational.hpp"

namespace cliquedec {

class PatternError : public std::runtime_error {
 public:
  explicit PatternError(const std::string& what) : std::runtime_error(what) {}
};
class CatalogLimitError : public std::runtime_error {
 public:
  explicit CatalogLimitError(const std::string& what) : std::runtime_error(what) {}
};

/// What a pair of vertices can carry. Three families:
///   binary    edge / non-edge            (graphs)
///   oriented  exactly one direction      (tournaments)
///   colored   one color from an ordered palette
/// Palettes are ordered and color identity matters: there is no quotient
/// by color permutations.
enum class PairKind : std::uint8_t { binary = 0, oriented = 1, colored = 2 };

struct LabelKind {
  PairKind pair = PairKind::binary;
  std::vector<std::string> palette;  // colored only; label value = palette index

  static LabelKind binary_kind() { return {PairKind::binary, {}}; }
  static LabelKind oriented_kind() { return {PairKind::oriented, {}}; }
  static LabelKind colored_kind(std::vector<std::string> colors) {
    if (colors.empty()) throw PatternError("colored kind needs a non-empty palette");
    return {PairKind::colored, std::move(colors)};
  }

  int states() const {
    return pair == PairKind::colored ? static_cast<int>(palette.size()) : 2;
  }
  bool operator==(const LabelKind&) const = default;

  std::string describe() const {
    switch (pair) {
      case PairKind::binary: return "binary";
      case PairKind::oriented: return "oriented";
      case PairKind::colored: {
        std::string s = "colored(";
        for (std::size_t i = 0; i < palette.size(); ++i)
          s += (i ? "," : "") + palette[i];
        return s + ")";
      }
    }
    return "?";
  }
};

inline std::size_t pair_count(int n) { return static_cast<std::size_t>(n) * (n - 1) / 2; }

/// Row-major upper-triangle index of pair (i,j), i < j.
inline std::size_t pair_index(int i, int j, int n) {
  return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i + 1) / 2 + (j - i - 1);
}

namespace detail {

/// Label of the (i,j) slot of the relabelled structure, where position u of
/// the new structure holds original vertex perm[u]. Oriented labels flip
/// when the permutation reverses the stored order.
inline std::uint8_t permuted_label(const std::uint8_t* labels, int n, PairKind pk,
                                   const int* perm, int i, int j) {
  int a = perm[i], b = perm[j];
  if (a < b) return labels[pair_index(a, b, n)];
  std::uint8_t l = labels[pair_index(b, a, n)];
  return pk == PairKind::oriented ? static_cast<std::uint8_t>(1 - l) : l;
}

}  // namespace detail

/// An isomorphism class of k-vertex pair-labelled complete graphs, stored as
/// its canonical representative. The id is the lexicographic minimum, over
/// all k! vertex orders, of the row-major upper-triangle label bytes.
struct Pattern {
  int order = 0;
  LabelKind kind;
  std::vector<std::uint8_t> labels;  // canonical, row-major upper triangle
  std::string id;                    // the same bytes as a string key

  bool operator==(const Pattern& o) const {
    return order == o.order && kind == o.kind && id == o.id;
  }
};

/// Canonicalizes a complete labelling. Brute force over k! permutations;
/// k is capped well below anything that would make that expensive.
inline Pattern canonical_pattern(int k, const LabelKind& kind,
                                 const std::vector<std::uint8_t>& raw) {
  if (k < 3) throw PatternError("pattern order must be at least 3");
  if (k > 7) throw PatternError("pattern order above 7 unsupported");
  if (raw.size() != pair_count(k))
    throw PatternError("expected " + std::to_string(pair_count(k)) + " pair labels, got " +
                       std::to_string(raw.size()));
  for (auto l : raw)
    if (l >= kind.states())
      throw PatternError("label value " + std::to_string(int(l)) + " invalid for kind " +
                         kind.describe());

  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::uint8_t> best(raw), cur(pair_count(k));
  do {
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        cur[pair_index(i, j, k)] = detail::permuted_label(raw.data(), k, kind.pair, perm.data(), i, j);
    if (cur < best) best = cur;
  } while (std::next_permutation(perm.begin(), perm.end()));

  Pattern p;
  p.order = k;
  p.kind = kind;
  p.labels = std::move(best);
  p.id.assign(p.labels.begin(), p.labels.end());
  return p;
}

/// Number of pairs of `p` carrying `label`. Sums to C(k,2) over all labels.
inline int label_count(const Pattern& p, int label) {
  if (label < 0 || label >= p.kind.states())
    throw PatternError("unknown label " + std::to_string(label) + " for kind " + p.kind.describe());
  return static_cast<int>(std::count(p.labels.begin(), p.labels.end(),
                                     static_cast<std::uint8_t>(label)));
}

/// All distinct patterns of a given order and kind, sorted by id.
struct PatternCatalog {
  int order = 0;
  LabelKind kind;
  std::vector<Pattern> patterns;
  std::map<std::string, int> by_id;

  int index_of(const std::string& id) const {
    auto it = by_id.find(id);
    return it == by_id.end() ? -1 : it->second;
  }
  int index_of(const Pattern& p) const { return index_of(p.id); }
  std::size_t size() const { return patterns.size(); }
};

/// Exhaustive labelled enumeration followed by canonical dedup.
/// `max_labelled` caps states^C(k,2); the default admits binary kinds up to
/// k = 5 and small colored palettes.
inline std::shared_ptr<const PatternCatalog> build_catalog(int k, const LabelKind& kind,
                                                           std::uint64_t max_labelled = 4096) {
  if (k < 3) throw PatternError("catalog order must be at least 3");
  if (k > 7) throw PatternError("catalog order above 7 unsupported");
  const std::size_t m = pair_count(k);
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (total > max_labelled / kind.states() + 1) total = max_labelled + 1;
    else total *= kind.states();
    if (total > max_labelled)
      throw CatalogLimitError("catalog enumeration for k=" + std::to_string(k) + ", kind " +
                              kind.describe() + " exceeds cap of " + std::to_string(max_labelled) +
                              " labelled structures");
  }

  auto cat = std::make_shared<PatternCatalog>();
  cat->order = k;
  cat->kind = kind;
  std::vector<std::uint8_t> labels(m, 0);
  std::map<std::string, Pattern> seen;
  for (std::uint64_t it = 0; it < total; ++it) {
    Pattern p = canonical_pattern(k, kind, labels);
    seen.try_emplace(p.id, std::move(p));
    // mixed-radix increment
    for (std::size_t d = 0; d < m; ++d) {
      if (++labels[d] < kind.states()) break;
      labels[d] = 0;
    }
  }
  for (auto& [id, p] : seen) {
    cat->by_id.emplace(id, static_cast<int>(cat->patterns.size()));
    cat->patterns.push_back(std::move(p));
  }
  return cat;
}

/// Order of the color-preserving automorphism group of `p`.
inline int automorphism_count(const Pattern& p) {
  std::vector<int> perm(p.order);
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0;
  const int k = p.order;
  do {
    bool fixed = true;
    for (int i = 0; i < k && fixed; ++i)
      for (int j = i + 1; j < k && fixed; ++j)
        fixed = detail::permuted_label(p.labels.data(), k, p.kind.pair, perm.data(), i, j) ==
                p.labels[pair_index(i, j, k)];
    count += fixed;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

/// One rational weight per catalog pattern. The domain must cover the
/// catalog exactly; missing or extra entries are construction errors.
struct WeightVector {
  std::shared_ptr<const PatternCatalog> catalog;
  std::vector<Rat> weights;  // aligned with catalog->patterns

  const Rat& operator[](std::size_t idx) const { return weights.at(idx); }

  const Rat& weight_of_id(const std::string& id) const {
    int idx = catalog->index_of(id);
    if (idx < 0) throw PatternError("pattern id not in catalog");
    return weights[idx];
  }

  /// Stable fingerprint over (pattern id, p/q) entries.
  std::uint64_t hash() const {
    Fnv1a64 h;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      h.feed(catalog->patterns[i].id);
      h.feed(to_pq(weights[i]));
    }
    return h.digest();
  }
};

inline WeightVector make_weight_vector(std::shared_ptr<const PatternCatalog> catalog,
                                       const std::map<std::string, Rat>& by_id) {
  WeightVector v;
  v.catalog = std::move(catalog);
  v.weights.assign(v.catalog->size(), Rat(0));
  std::vector<bool> set(v.catalog->size(), false);
  for (const auto& [id, w] : by_id) {
    int idx = v.catalog->index_of(id);
    if (idx < 0) throw PatternError("weight entry does not name a catalog pattern");
    if (set[idx]) throw PatternError("duplicate weight entry for one pattern");
    set[idx] = true;
    v.weights[idx] = w;
  }
  for (std::size_t i = 0; i < set.size(); ++i)
    if (!set[i])
      throw PatternError("missing weight for catalog pattern #" + std::to_string(i) +
                         "; entries are rejected, not defaulted");
  return v;
}

/// Named 3-vertex pattern aliases accepted in weight-vector files.
inline std::optional<std::pair<LabelKind, std::vector<std::uint8_t>>> pattern_alias(
    std::string_view name) {
  using V = std::vector<std::uint8_t>;
  if (name == "K3") return {{LabelKind::binary_kind(), V{1, 1, 1}}};
  if (name == "P3") return {{LabelKind::binary_kind(), V{1, 1, 0}}};
  if (name == "Q3") return {{LabelKind::binary_kind(), V{1, 0, 0}}};
  if (name == "I3") return {{LabelKind::binary_kind(), V{0, 0, 0}}};
  if (name == "T3") return {{LabelKind::oriented_kind(), V{1, 1, 1}}};
  if (name == "C3") return {{LabelKind::oriented_kind(), V{1, 0, 1}}};
  return std::nullopt;
}

/// Parses weight-vector text: one `<pattern>=<rational>` per line, where
/// <pattern> is a named alias (K3, P3, Q3, I3, T3, C3) or an explicit
/// upper-triangle digit string of length C(k,2). '#' starts a comment.
/// Commas separate entries on one line, so "T3=1,C3=0" works inline.
inline WeightVector parse_weight_vector(std::string_view text,
                                        std::shared_ptr<const PatternCatalog> catalog) {
  std::map<std::string, Rat> by_id;
  const std::size_t m = pair_count(catalog->order);
  std::string buf;
  {  // strip comments per line, then treat newlines as entry separators
    std::stringstream lines{std::string(text)};
    std::string line;
    while (std::getline(lines, line)) {
      if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      buf += line;
      buf += ',';
    }
  }
  std::stringstream ss(buf);
  std::string item;
  while (std::getline(ss, item, ',')) {
    while (!item.empty() && (item.back() == ' ' || item.back() == '\t' || item.back() == '\r'))
      item.pop_back();
    std::size_t start = item.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    item = item.substr(start);
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("weight entry lacks '=': '" + item + "'");
    std::string name = item.substr(0, eq);
    while (!name.empty() && name.back() == ' ') name.pop_back();
    Rat w = parse_rational(item.substr(eq + 1));

    Pattern p;
    if (auto alias = pattern_alias(name)) {
      if (!(alias->first == catalog->kind) || catalog->order != 3)
        throw PatternError("alias '" + name + "' does not match the catalog kind/order");
      p = canonical_pattern(3, catalog->kind, alias->second);
    } else {
      if (name.size() != m)
        throw PatternError("pattern literal '" + name + "' must be an alias or " +
                           std::to_string(m) + " digits");
      std::vector<std::uint8_t> raw;
      raw.reserve(m);
      for (char ch : name) {
        if (ch < '0' || ch > '9') throw PatternError("bad label digit in '" + name + "'");
        raw.push_back(static_cast<std::uint8_t>(ch - '0'));
      }
      p = canonical_pattern(catalog->order, catalog->kind, raw);
    }
    if (by_id.count(p.id)) throw PatternError("two entries name the same pattern: '" + name + "'");
    by_id.emplace(p.id, std::move(w));
  }
  return make_weight_vector(std::move(catalog), by_id);
}

/// Affine normalization v = c*v' + d*1 with min(v') = 0, max(v') = 1.
struct NormalizedVector {
  bool constant = false;
  Rat scale;   // c > 0 when not constant
  Rat offset;  // d; for constant vectors, the constant itself
  std::optional<WeightVector> unit;
};

inline NormalizedVector normalize_vector(const WeightVector& v) {
  if (v.weights.empty()) throw PatternError("cannot normalize an empty vector");
  Rat lo = v.weights[0], hi = v.weights[0];
  for (const Rat& w : v.weights) {
    if (w < lo) lo = w;
    if (w > hi) hi = w;
  }
  NormalizedVector out;
  if (lo == hi) {
    out.constant = true;
    out.offset = lo;
    return out;
  }
  out.scale = hi - lo;
  out.offset = lo;
  WeightVector unit;
  unit.catalog = v.catalog;
  unit.weights.reserve(v.weights.size());
  for (const Rat& w : v.weights) unit.weights.push_back((w - lo) / out.scale);
  out.unit = std::move(unit);
  return out;
}

}  // namespace cliquedec
