#include "zhconv/mapping.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace zhconv {

MappingTable::MappingTable() { nodes_.emplace_back(); }

int MappingTable::walk_or_insert(std::u32string_view key) {
  int node = 0;
  for (char32_t c : key) {
    auto it = nodes_[node].children.find(c);
    if (it == nodes_[node].children.end()) {
      int next = static_cast<int>(nodes_.size());
      nodes_[node].children.emplace(c, next);
      nodes_.emplace_back();
      node = next;
    } else {
      node = it->second;
    }
  }
  return node;
}

void MappingTable::add_entry(std::u32string sc,
                             std::vector<std::u32string> candidates) {
  if (sc.empty()) throw TableError("empty SC key");
  if (candidates.empty()) throw TableError("no TC candidates for key");
  for (const auto& cand : candidates) {
    if (cand.size() != sc.size())
      throw TableError("candidate length mismatch for key '" + encode_utf8(sc) +
                       "': candidate '" + encode_utf8(cand) + "'");
  }
  int node = walk_or_insert(sc);
  if (nodes_[node].entry < 0) {
    nodes_[node].entry = static_cast<int>(entries_.size());
    entries_.push_back({std::move(sc), {}});
  }
  auto& list = entries_[nodes_[node].entry].tc_candidates;
  for (auto& cand : candidates) {
    if (std::find(list.begin(), list.end(), cand) == list.end())
      list.push_back(std::move(cand));
  }
  max_key_length_ =
      std::max(max_key_length_, entries_[nodes_[node].entry].sc.size());
}

MappingTable MappingTable::load(std::istream& in) {
  MappingTable table;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw TableError("line " + std::to_string(lineno) + ": missing tab");
    std::string sc_part = line.substr(0, tab);
    std::string tc_part = line.substr(tab + 1);
    if (sc_part.empty())
      throw TableError("line " + std::to_string(lineno) + ": empty SC field");
    std::vector<std::u32string> candidates;
    std::istringstream iss(tc_part);
    std::string cand;
    while (iss >> cand) candidates.push_back(decode_utf8(cand));
    if (candidates.empty())
      throw TableError("line " + std::to_string(lineno) + ": empty TC field");
    try {
      table.add_entry(decode_utf8(sc_part), std::move(candidates));
    } catch (const TableError& e) {
      throw TableError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return table;
}

MappingTable MappingTable::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TableError("cannot open mapping table: " + path);
  return load(in);
}

const MappingEntry* MappingTable::find(std::u32string_view sc) const {
  int node = 0;
  for (char32_t c : sc) {
    auto it = nodes_[node].children.find(c);
    if (it == nodes_[node].children.end()) return nullptr;
    node = it->second;
  }
  return nodes_[node].entry >= 0 ? &entries_[nodes_[node].entry] : nullptr;
}

std::vector<std::u32string> MappingTable::candidates(
    std::u32string_view sc) const {
  const MappingEntry* e = find(sc);
  return e ? e->tc_candidates : std::vector<std::u32string>{};
}

size_t MappingTable::char_ambiguity(char32_t c) const {
  const MappingEntry* e = find(std::u32string_view(&c, 1));
  if (!e) return 0;
  return e->tc_candidates.size();
}

std::vector<std::u32string> MappingTable::word_list() const {
  std::vector<std::u32string> words;
  words.reserve(entries_.size());
  for (const auto& e : entries_) words.push_back(e.sc);
  return words;
}

void MappingTable::match_prefixes(
    std::u32string_view text,
    const std::function<void(const MappingEntry&)>& cb) const {
  int node = 0;
  for (char32_t c : text) {
    auto it = nodes_[node].children.find(c);
    if (it == nodes_[node].children.end()) return;
    node = it->second;
    if (nodes_[node].entry >= 0) cb(entries_[nodes_[node].entry]);
  }
}

const MappingEntry* MappingTable::longest_prefix(
    std::u32string_view text) const {
  const MappingEntry* best = nullptr;
  match_prefixes(text, [&](const MappingEntry& e) { best = &e; });
  return best;
}

MappingTable MappingTable::reversed() const {
  MappingTable rev;
  for (const auto& e : entries_) {
    for (const auto& cand : e.tc_candidates)
      rev.add_entry(cand, {e.sc});
  }
  return rev;
}

ConversionLattice build_lattice(std::u32string_view sentence,
                                const MappingTable& table) {
  ConversionLattice lattice;
  lattice.source.assign(sentence.begin(), sentence.end());
  size_t n = lattice.length();
  lattice.edges.resize(n + 1);
  for (size_t j = 0; j < n; ++j) {
    bool has_single = false;
    table.match_prefixes(std::u32string_view(lattice.source).substr(j),
                         [&](const MappingEntry& e) {
                           if (e.sc.size() == 1) has_single = true;
                           lattice.edges[j].push_back(
                               {j, j + e.sc.size(), &e, false});
                         });
    if (!has_single) {
      // identity fallback keeps the lattice total and passes code-mixed
      // characters through unchanged
      std::u32string c(1, lattice.source[j]);
      lattice.fallback_entries.push_back({c, {c}});
      lattice.edges[j].insert(lattice.edges[j].begin(),
                              {j, j + 1, &lattice.fallback_entries.back(),
                               true});
    }
    std::stable_sort(lattice.edges[j].begin(), lattice.edges[j].end(),
                     [](const LatticeEdge& a, const LatticeEdge& b) {
                       return a.end < b.end;
                     });
  }
  return lattice;
}

}  // namespace zhconv
