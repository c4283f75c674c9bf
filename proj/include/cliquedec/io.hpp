#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cliquedec/hash.hpp"
#include "cliquedec/hosts.hpp"

namespace cliquedec {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// digraph6 / graph6 codecs. Only the n <= 62 short size form is implemented;
// every catalog in scope satisfies it, and longer forms are rejected with a
// clear message.

struct Digraph6Record {
  int n = 0;
  std::vector<std::uint8_t> bits;  // n*n, row-major; bit (i,j) = 1 iff i->j
  std::size_t source_line = 0;
};

namespace detail {

inline int decode_size_byte(std::string_view line, std::size_t at, const char* what) {
  if (at >= line.size()) throw IoError(std::string(what) + ": truncated size field");
  unsigned ch = static_cast<unsigned char>(line[at]);
  if (ch == 126)
    throw IoError(std::string(what) + ": long size form (n > 62) not supported");
  if (ch < 63 || ch > 125)
    throw IoError(std::string(what) + ": size byte out of range");
  return static_cast<int>(ch - 63);
}

inline std::vector<std::uint8_t> decode_bit_groups(std::string_view data, std::size_t nbits,
                                                   const char* what) {
  const std::size_t need = (nbits + 5) / 6;
  if (data.size() != need)
    throw IoError(std::string(what) + ": expected " + std::to_string(need) + " data bytes, got " +
                  std::to_string(data.size()));
  std::vector<std::uint8_t> bits;
  bits.reserve(need * 6);
  for (char c : data) {
    unsigned ch = static_cast<unsigned char>(c);
    if (ch < 63 || ch > 126) throw IoError(std::string(what) + ": data byte out of range");
    unsigned v = ch - 63;
    for (int b = 5; b >= 0; --b) bits.push_back((v >> b) & 1);
  }
  for (std::size_t i = nbits; i < bits.size(); ++i)
    if (bits[i]) throw IoError(std::string(what) + ": nonzero padding bits");
  bits.resize(nbits);
  return bits;
}

inline std::string encode_bit_groups(const std::vector<std::uint8_t>& bits) {
  std::string out;
  out.reserve((bits.size() + 5) / 6);
  for (std::size_t at = 0; at < bits.size(); at += 6) {
    unsigned v = 0;
    for (int b = 0; b < 6; ++b) {
      v <<= 1;
      if (at + b < bits.size()) v |= bits[at + b];
    }
    out.push_back(static_cast<char>(v + 63));
  }
  return out;
}

}  // namespace detail

inline Digraph6Record decode_digraph6(std::string_view line, std::size_t source_line = 0) {
  if (line.empty() || line[0] != '&') throw IoError("digraph6: line must begin with '&'");
  Digraph6Record rec;
  rec.source_line = source_line;
  rec.n = detail::decode_size_byte(line, 1, "digraph6");
  rec.bits = detail::decode_bit_groups(line.substr(2),
                                       static_cast<std::size_t>(rec.n) * rec.n, "digraph6");
  for (int i = 0; i < rec.n; ++i)
    if (rec.bits[static_cast<std::size_t>(i) * rec.n + i])
      throw IoError("digraph6: diagonal bit set");
  return rec;
}

inline Host digraph6_to_tournament(const Digraph6Record& rec, std::string provenance) {
  if (rec.n < 1) throw IoError("digraph6: empty digraph");
  Host h = make_host(rec.n, LabelKind::oriented_kind(), std::move(provenance));
  for (int i = 0; i < rec.n; ++i) {
    for (int j = i + 1; j < rec.n; ++j) {
      int ij = rec.bits[static_cast<std::size_t>(i) * rec.n + j];
      int ji = rec.bits[static_cast<std::size_t>(j) * rec.n + i];
      if (ij + ji != 1)
        throw IoError("digraph6: not a tournament (pair " + std::to_string(i) + "," +
                      std::to_string(j) + ")");
      h.pairs[pair_index(i, j, rec.n)] = static_cast<std::int8_t>(ij);
    }
  }
  return h;
}

inline std::string encode_digraph6(const Host& t) {
  if (!t.is_tournament()) throw IoError("digraph6 encoding requires a tournament");
  if (t.n > 62) throw IoError("digraph6: n > 62 unsupported");
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(t.n) * t.n, 0);
  for (int i = 0; i < t.n; ++i)
    for (int j = i + 1; j < t.n; ++j) {
      if (t.pairs[pair_index(i, j, t.n)] == 1) bits[static_cast<std::size_t>(i) * t.n + j] = 1;
      else bits[static_cast<std::size_t>(j) * t.n + i] = 1;
    }
  std::string out = "&";
  out.push_back(static_cast<char>(t.n + 63));
  out += detail::encode_bit_groups(bits);
  return out;
}

/// graph6 decoding to a binary-kind host (label 1 = edge). Upper triangle,
/// column-major: (0,1), (0,2), (1,2), (0,3), ...
inline Host decode_graph6(std::string_view line, std::string provenance = "graph6") {
  if (!line.empty() && line[0] == ':') throw IoError("graph6: sparse6 not supported");
  int n = detail::decode_size_byte(line, 0, "graph6");
  if (n < 1) throw IoError("graph6: empty graph line");
  auto bits = detail::decode_bit_groups(line.substr(1), pair_count(n), "graph6");
  Host h = make_host(n, LabelKind::binary_kind(), std::move(provenance));
  std::size_t at = 0;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i) h.pairs[pair_index(i, j, n)] = static_cast<std::int8_t>(bits[at++]);
  return h;
}

inline std::string encode_graph6(const Host& g) {
  if (g.kind.pair != PairKind::binary) throw IoError("graph6 encoding requires a binary host");
  if (!g.complete()) throw IoError("graph6 encoding requires a complete labelling");
  if (g.n > 62) throw IoError("graph6: n > 62 unsupported");
  std::vector<std::uint8_t> bits;
  bits.reserve(pair_count(g.n));
  for (int j = 1; j < g.n; ++j)
    for (int i = 0; i < j; ++i) bits.push_back(g.pairs[pair_index(i, j, g.n)] == 1);
  std::string out;
  out.push_back(static_cast<char>(g.n + 63));
  out += detail::encode_bit_groups(bits);
  return out;
}

// ---------------------------------------------------------------------------
// Base catalogs for the search.

struct BaseCatalog {
  int order = 0;
  std::vector<PackedTournament> hosts;
  bool complete = false;   // count matched a caller-asserted catalog size
  std::uint64_t digest = 0;  // FNV over the validated lines
  std::string source;
};

/// Reads a digraph6 tournament catalog. The completeness flag is set only
/// when the record count matches the caller-asserted size for that order.
inline BaseCatalog read_base_catalog(std::istream& in, int expected_order,
                                     std::optional<std::uint64_t> asserted_count,
                                     std::string source = "<stream>") {
  BaseCatalog cat;
  cat.order = expected_order;
  cat.source = std::move(source);
  Fnv1a64 digest;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == ">>digraph6<<") continue;
    Digraph6Record rec = decode_digraph6(line, lineno);
    if (rec.n != expected_order)
      throw IoError(cat.source + ":" + std::to_string(lineno) + ": order " +
                    std::to_string(rec.n) + " in a catalog of order " +
                    std::to_string(expected_order));
    Host t = digraph6_to_tournament(rec, cat.source + ":" + std::to_string(lineno));
    cat.hosts.push_back(pack_tournament(t));
    digest.feed(line);
    digest.feed("\n");
  }
  cat.digest = digest.digest();
  cat.complete = asserted_count && cat.hosts.size() == *asserted_count;
  return cat;
}

inline BaseCatalog read_base_catalog_file(const std::string& path, int expected_order,
                                          std::optional<std::uint64_t> asserted_count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open catalog file: " + path);
  return read_base_catalog(in, expected_order, asserted_count, path);
}

// ---------------------------------------------------------------------------
// Small file helpers.

inline void save_file_atomic(const std::string& path, std::string_view contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("rename " + tmp + " -> " + path + ": " + ec.message());
}

inline std::string load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cliquedec
