#include "cli/formats.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace qpurify::cli {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin != end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (end != begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError("cannot parse " + what + " from '" + text + "'");
  return v;
}

void write_metadata(std::ostream& os, const Metadata& metadata) {
  for (const auto& [key, value] : metadata) os << "# " << key << '=' << value << '\n';
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw ConfigError("grid must be lo:hi:n, got '" + spec + "'");
  const double lo = parse_number(parts[0], "grid start");
  const double hi = parse_number(parts[1], "grid end");
  const double n = parse_number(parts[2], "grid size");
  if (!(n >= 1.0) || n != std::floor(n)) throw ConfigError("grid size must be a positive integer");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) throw ConfigError("grid needs finite lo <= hi");
  const auto count = static_cast<std::size_t>(n);
  std::vector<double> grid(count, lo);
  for (std::size_t i = 1; i < count; ++i) grid[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  if (count > 1) grid.back() = hi;
  return grid;
}

double SampleFile::number(const std::string& key) const {
  auto it = metadata.find(key);
  if (it == metadata.end()) throw ConfigError("sample file lacks '" + key + "' metadata");
  return parse_number(it->second, key);
}

EnsembleSnapshot SampleFile::to_snapshot() const {
  EnsembleSnapshot s;
  s.time = number("t");
  s.values = values;
  if (auto it = metadata.find("backend"); it != metadata.end()) {
    auto b = parse_backend(it->second);
    if (!b) throw ConfigError("unknown backend '" + it->second + "' in sample file");
    s.backend = *b;
  } else {
    s.backend = column == "Q" ? Backend::langevin_Q : Backend::langevin_q;
  }
  if ((column == "Q") != !samples_q(s.backend)) throw ConfigError("sample column does not match backend");
  if (metadata.count("step")) s.step = static_cast<long>(number("step"));
  if (metadata.count("excursion_count")) s.excursion_count = static_cast<long>(number("excursion_count"));
  return s;
}

void write_snapshot_csv(std::ostream& os, const EnsembleSnapshot& snapshot, const SimConfig& config) {
  write_metadata(os, {
                         {"backend", std::string(to_string(snapshot.backend))},
                         {"boundary_policy", std::string(to_string(config.boundary_policy))},
                         {"dt", format_double(config.dt)},
                         {"eta", format_double(config.eta)},
                         {"etat", format_double(config.eta * snapshot.time)},
                         {"excursion_count", std::to_string(snapshot.excursion_count)},
                         {"n_traj", std::to_string(snapshot.values.size())},
                         {"seed", std::to_string(config.master_seed)},
                         {"step", std::to_string(snapshot.step)},
                         {"t", format_double(snapshot.time)},
                     });
  os << (samples_q(snapshot.backend) ? "q" : "Q") << '\n';
  for (double v : snapshot.values) os << format_double(v) << '\n';
}

SampleFile read_snapshot_csv(std::istream& is) {
  SampleFile file;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto body = line.substr(1);
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
      };
      file.metadata[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
      continue;
    }
    if (file.column.empty()) {
      if (line != "q" && line != "Q") throw ConfigError("sample file header must be 'q' or 'Q', got '" + line + "'");
      file.column = line;
      continue;
    }
    file.values.push_back(parse_number(line, "sample"));
  }
  if (file.column.empty() || file.values.empty()) throw ConfigError("sample file contains no samples");
  return file;
}

void write_density_csv(std::ostream& os, const DensityCurve& curve) {
  write_metadata(os, {
                         {"eta", format_double(curve.eta)},
                         {"etat", format_double(curve.eta * curve.time)},
                         {"t", format_double(curve.time)},
                         {"which", std::string(to_string(curve.which))},
                     });
  os << "x,density\n";
  for (const auto& [x, p] : curve.points) os << format_double(x) << ',' << format_double(p) << '\n';
}

void write_histogram_csv(std::ostream& os, const Histogram& hist, const Metadata& metadata) {
  Metadata meta = metadata;
  meta["below"] = std::to_string(hist.below);
  meta["above"] = std::to_string(hist.above);
  meta["n"] = std::to_string(hist.total());
  write_metadata(os, meta);
  os << "x,density\n";
  const auto d = hist.density();
  for (std::size_t i = 0; i < d.size(); ++i) {
    os << format_double(0.5 * (hist.edges[i] + hist.edges[i + 1])) << ',' << format_double(d[i]) << '\n';
  }
}

nlohmann::json to_json(const ComparisonReport& r) {
  nlohmann::json moments = nlohmann::json::array();
  for (const auto& m : r.moment_table) {
    moments.push_back({{"name", m.name}, {"empirical", m.empirical}, {"analytic", m.analytic}, {"stderr", m.stderr_}});
  }
  nlohmann::json j = {
      {"time", r.time},
      {"eta", r.eta},
      {"etat", r.eta * r.time},
      {"backend", r.backend},
      {"which", r.which},
      {"n_samples", r.n_samples},
      {"out_of_range", r.out_of_range},
      {"moment_table", moments},
  };
  j["ks_statistic"] = r.ks_statistic ? nlohmann::json(*r.ks_statistic) : nlohmann::json(nullptr);
  j["l1_distance"] = r.l1_distance ? nlohmann::json(*r.l1_distance) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const SimConfig& c) {
  return {
      {"eta", c.eta},
      {"dt", c.dt},
      {"steps", c.n_steps},
      {"traj", c.n_traj},
      {"seed", c.master_seed},
      {"backend", std::string(to_string(c.backend))},
      {"snapshots", c.snapshot_times},
      {"boundary", std::string(to_string(c.boundary_policy))},
  };
}

std::string to_toml(const SimConfig& c) {
  std::ostringstream os;
  os << "[simulate]\n"
     << "eta = " << format_double(c.eta) << '\n'
     << "dt = " << format_double(c.dt) << '\n'
     << "steps = " << c.n_steps << '\n'
     << "traj = " << c.n_traj << '\n'
     << "seed = " << c.master_seed << '\n'
     << "backend = \"" << to_string(c.backend) << "\"\n"
     << "boundary = \"" << to_string(c.boundary_policy) << "\"\n"
     << "snapshots = [";
  for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) {
    os << (i ? ", " : "") << format_double(c.snapshot_times[i]);
  }
  os << "]\n";
  return os.str();
}

}  // namespace qpurify::cli
