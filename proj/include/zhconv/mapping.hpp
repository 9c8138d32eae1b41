#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zhconv/utf8.hpp"

namespace zhconv {

class TableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One record of a conversion table: an SC subword and its ordered TC
// candidates. All candidates have the same character count as sc; the
// first candidate is the default (most frequent) one.
struct MappingEntry {
  std::u32string sc;
  std::vector<std::u32string> tc_candidates;
};

// SC->TC table indexed by a prefix trie over the SC side. Immutable
// once loaded; safe for concurrent reads.
class MappingTable {
 public:
  MappingTable();

  // Reads the tab-separated table format: "<sc>\t<tc1> <tc2> ...".
  // '#' comments and blank lines are skipped. Duplicate SC keys merge
  // candidate lists, first occurrence first, duplicates dropped.
  static MappingTable load(std::istream& in);
  static MappingTable load_file(const std::string& path);

  void add_entry(std::u32string sc, std::vector<std::u32string> candidates);

  // nullptr when sc is not a key.
  const MappingEntry* find(std::u32string_view sc) const;

  // Candidate list for sc, empty when absent.
  std::vector<std::u32string> candidates(std::u32string_view sc) const;

  // Number of distinct TC candidate characters for a single SC character;
  // 0 when the character has no single-character entry.
  size_t char_ambiguity(char32_t c) const;
  bool is_ambiguous(char32_t c) const { return char_ambiguity(c) >= 2; }

  size_t size() const { return entries_.size(); }
  size_t max_key_length() const { return max_key_length_; }
  const std::vector<MappingEntry>& entries() const { return entries_; }

  // All SC keys; doubles as the segmentation dictionary.
  std::vector<std::u32string> word_list() const;

  // Invokes cb(entry) for every key that is a prefix of text, shortest
  // first. Spans at most max_key_length() characters.
  void match_prefixes(std::u32string_view text,
                      const std::function<void(const MappingEntry&)>& cb) const;

  // Longest key that is a prefix of text; nullptr when none.
  const MappingEntry* longest_prefix(std::u32string_view text) const;

  // Mechanical TC->SC table: each tc_candidate maps back to its sc.
  MappingTable reversed() const;

 private:
  struct TrieNode {
    std::map<char32_t, int> children;
    int entry = -1;
  };
  int walk_or_insert(std::u32string_view key);

  std::vector<TrieNode> nodes_;
  std::vector<MappingEntry> entries_;
  size_t max_key_length_ = 0;
};

// Edge of the conversion lattice: covers source span [start, end) with a
// mapping entry. Fallback edges carry a synthesized identity entry for
// characters absent from the table.
struct LatticeEdge {
  size_t start = 0;
  size_t end = 0;
  const MappingEntry* entry = nullptr;
  bool fallback = false;
};

// DAG over character boundaries 0..length. Totality is guaranteed:
// every position has at least one outgoing edge.
struct ConversionLattice {
  std::u32string source;
  std::vector<std::vector<LatticeEdge>> edges;  // edges[j] start at boundary j
  std::deque<MappingEntry> fallback_entries;    // storage for identity edges

  size_t length() const { return source.size(); }
};

ConversionLattice build_lattice(std::u32string_view sentence,
                                const MappingTable& table);

}  // namespace zhconv
