#pragma once

// On-disk schemas shared by the qpurify subcommands.
//
// Snapshot CSV:   '# key=value' metadata lines, a one-column header ('q', or
//                 'Q' for langevin_Q), then one value per line.
// Curve CSV:      metadata lines, header 'x,density', then rows.
// Reports:        JSON (nlohmann::json).
//
// Doubles are written in shortest round-trip form so files re-read exactly.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "qpurify/analytic.hpp"
#include "qpurify/sde.hpp"
#include "qpurify/stats.hpp"

namespace qpurify::cli {

std::string format_double(double x);

/// "lo:hi:n" -> n evenly spaced points including both ends (n >= 1).
std::vector<double> parse_grid(const std::string& spec);

using Metadata = std::map<std::string, std::string>;

struct SampleFile {
  Metadata metadata;
  std::string column;
  std::vector<double> values;

  /// Throws ConfigError if the key is missing or not a number.
  double number(const std::string& key) const;
  EnsembleSnapshot to_snapshot() const;
};

void write_snapshot_csv(std::ostream& os, const EnsembleSnapshot& snapshot, const SimConfig& config);
/// Throws ConfigError on malformed input or an empty sample list.
SampleFile read_snapshot_csv(std::istream& is);

void write_density_csv(std::ostream& os, const DensityCurve& curve);
/// Bin centres against normalized density.
void write_histogram_csv(std::ostream& os, const Histogram& hist, const Metadata& metadata);

nlohmann::json to_json(const ComparisonReport& report);
nlohmann::json to_json(const SimConfig& config);
/// TOML ([simulate] section) accepted by `qpurify simulate --config`.
std::string to_toml(const SimConfig& config);

}  // namespace qpurify::cli
