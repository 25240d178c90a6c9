#pragma once

// Experiment configuration: flat key = value text with optional [section]
// headers. Keys inside a section are stored as "section.key".
//
//   experiment = exact
//   seed = 42
//   graph = lattice d=1 side=3     # inline form, same as a [graph] section
//   beta = 0.5
//
//   [risk]
//   A_grid = 0.01, 0.02, 0.05

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "spinlab/graph.hpp"
#include "spinlab/model.hpp"

namespace spinlab {

class Config {
 public:
  /// Throws ConfigError with the offending line number.
  static Config parse(std::istream& in);
  static Config parse_string(const std::string& text);
  static Config load(const std::string& path);

  const std::string& text() const { return text_; }
  const std::map<std::string, std::string>& entries() const { return entries_; }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  /// Numeric getters throw ConfigError on malformed values.
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  /// Comma- or whitespace-separated lists.
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<long> get_longs(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }

 private:
  std::string text_;
  std::map<std::string, std::string> entries_;
};

const std::vector<std::string>& experiment_names();

/// [graph] kind = lattice (d, side) | curie_weiss (n) | erdos_renyi (n, lambda,
/// seed) | regular_tree (k, depth) | edge_list (path).
InteractionGraph graph_from_config(const Config& cfg);

/// [model] beta, boundary, and either a uniform h or an explicit field list.
IsingParams params_from_config(const Config& cfg, const InteractionGraph& g);

/// Schema and semantic checks without running anything. Returns the list of
/// violations; empty means the configuration is runnable.
std::vector<std::string> validate_config(const Config& cfg);

/// 64-bit FNV-1a of the configuration text, hex encoded.
std::string config_hash(const Config& cfg);

}  // namespace spinlab
