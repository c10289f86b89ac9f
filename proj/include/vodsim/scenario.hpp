// Copyright 2026 The vodsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#pragma once

#include <atomic>
#include <charconv>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <thread>
#include <vector>

#include "json.hpp"
#include "vodsim/simulator.hpp"

namespace vodsim {

using json = nlohmann::json;

inline constexpr int kScenarioSchema = 1;

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ClusterSweepSpec {
  std::size_t viewers = 1000;
  std::vector<std::size_t> cluster_counts;
};

struct SweepGrid {
  std::vector<std::uint64_t> seeds;
  std::vector<TopologyConfig> topologies;
  std::vector<double> rates;  // stream rate in bits/s
  std::vector<double> lambdas;
};

struct Scenario {
  std::string name;
  SimConfig config;
  std::optional<SweepGrid> sweep;
  std::optional<ClusterSweepSpec> cluster_sweep;
};

/// One concrete run after sweep expansion.
struct RunPoint {
  std::string name;
  SimConfig config;
  std::optional<ClusterSweepSpec> cluster_sweep;
};

enum class OutputFormat { json, csv, both };

// ---------------------------------------------------------------------------
// Number formatting. Shortest round-trip form so CSV output is stable and
// exact.

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

// ---------------------------------------------------------------------------
// SimConfig <-> JSON

inline json to_json(const TopologyConfig& t) {
  return json{{"num_app_servers", t.num_app_servers},
              {"db_per_app", t.db_per_app},
              {"interconnect", to_string(t.interconnect)}};
}

inline json to_json(const SimConfig& c) {
  return json{
      {"seed", c.seed},
      {"tick_unit", c.tick_unit},
      {"topology", to_json(c.topology)},
      {"catalog", {{"n_videos", c.catalog.n_videos}, {"alpha", c.catalog.alpha}}},
      {"cache",
       {{"capacity", c.cache.capacity}, {"lambda", c.cache.lambda}, {"prewarm", c.cache.prewarm}}},
      {"session",
       {{"duration_ticks", c.session.duration_ticks}, {"total_ticks", c.session.total_ticks}}},
      {"capacity",
       {{"session_capacity_bps", c.capacity.session_capacity_bps},
        {"loss_threshold", c.capacity.loss_threshold}}},
      {"stream", {{"size_bits", c.stream.size_bits}, {"duration_s", c.stream.duration_s}}},
      {"replication", c.replication},
      {"request_rate", c.request_rate},
      {"arrival", c.arrival == Arrival::poisson ? "poisson" : "fixed"},
      {"queue_capacity", c.queue_capacity},
  };
}

namespace detail {

// Collects every problem in a document instead of stopping at the first.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  void fail(const std::string& path, const std::string& msg) { problems_.push_back(path + ": " + msg); }

  bool object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    fail(path, "expected an object");
    return false;
  }

  void known_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) return;
    for (const auto& [k, v] : j.items()) {
      bool ok = false;
      for (const char* key : keys) ok = ok || k == key;
      if (!ok) fail(join(path, k), "unknown field");
    }
  }

  template <class T>
  void number(const json& j, const std::string& path, const char* key, T& out) {
    if (!j.is_object() || !j.contains(key)) return;
    const json& v = j.at(key);
    const std::string p = join(path, key);
    if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) return fail(p, "expected a number");
      out = v.get<T>();
    } else if constexpr (std::is_signed_v<T>) {
      if (!v.is_number_integer()) return fail(p, "expected an integer");
      out = v.get<T>();
    } else {
      if (!v.is_number_integer()) return fail(p, "expected an integer");
      if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
        return fail(p, "must be non-negative");
      }
      out = v.get<T>();
    }
  }

  void boolean(const json& j, const std::string& path, const char* key, bool& out) {
    if (!j.is_object() || !j.contains(key)) return;
    if (!j.at(key).is_boolean()) return fail(join(path, key), "expected true or false");
    out = j.at(key).get<bool>();
  }

  void string(const json& j, const std::string& path, const char* key, std::string& out) {
    if (!j.is_object() || !j.contains(key)) return;
    if (!j.at(key).is_string()) return fail(join(path, key), "expected a string");
    out = j.at(key).get<std::string>();
  }

  void topology(const json& j, const std::string& path, TopologyConfig& t) {
    if (!object(j, path)) return;
    known_keys(j, path, {"num_app_servers", "db_per_app", "interconnect"});
    number(j, path, "num_app_servers", t.num_app_servers);
    number(j, path, "db_per_app", t.db_per_app);
    if (j.contains("interconnect")) {
      std::string name;
      string(j, path, "interconnect", name);
      if (auto ic = parse_interconnect(name)) {
        t.interconnect = *ic;
      } else if (j.at("interconnect").is_string()) {
        fail(join(path, "interconnect"), "must be one of ring, chain, complete");
      }
    }
    if (t.num_app_servers < 1) fail(join(path, "num_app_servers"), "must be at least 1");
    if (t.db_per_app < 1) fail(join(path, "db_per_app"), "must be at least 1");
  }

  void config(const json& j, const std::string& path, SimConfig& c) {
    if (!object(j, path)) return;
    known_keys(j, path,
               {"seed", "tick_unit", "topology", "catalog", "cache", "session", "capacity",
                "stream", "replication", "request_rate", "arrival", "queue_capacity"});
    number(j, path, "seed", c.seed);
    string(j, path, "tick_unit", c.tick_unit);
    if (j.contains("topology")) topology(j.at("topology"), join(path, "topology"), c.topology);
    section(j, path, "catalog", {"n_videos", "alpha"}, [&](const json& s, const std::string& p) {
      number(s, p, "n_videos", c.catalog.n_videos);
      number(s, p, "alpha", c.catalog.alpha);
    });
    section(j, path, "cache", {"capacity", "lambda", "prewarm"}, [&](const json& s, const std::string& p) {
      number(s, p, "capacity", c.cache.capacity);
      number(s, p, "lambda", c.cache.lambda);
      boolean(s, p, "prewarm", c.cache.prewarm);
    });
    section(j, path, "session", {"duration_ticks", "total_ticks"}, [&](const json& s, const std::string& p) {
      number(s, p, "duration_ticks", c.session.duration_ticks);
      number(s, p, "total_ticks", c.session.total_ticks);
    });
    section(j, path, "capacity", {"session_capacity_bps", "loss_threshold"},
            [&](const json& s, const std::string& p) {
              number(s, p, "session_capacity_bps", c.capacity.session_capacity_bps);
              number(s, p, "loss_threshold", c.capacity.loss_threshold);
            });
    section(j, path, "stream", {"size_bits", "duration_s"}, [&](const json& s, const std::string& p) {
      number(s, p, "size_bits", c.stream.size_bits);
      number(s, p, "duration_s", c.stream.duration_s);
    });
    number(j, path, "replication", c.replication);
    number(j, path, "request_rate", c.request_rate);
    number(j, path, "queue_capacity", c.queue_capacity);
    if (j.contains("arrival")) {
      std::string a;
      string(j, path, "arrival", a);
      if (a == "fixed") {
        c.arrival = Arrival::fixed;
      } else if (a == "poisson") {
        c.arrival = Arrival::poisson;
      } else if (j.at("arrival").is_string()) {
        fail(join(path, "arrival"), "must be fixed or poisson");
      }
    }
  }

  template <class T, class Parse>
  void list(const json& j, const std::string& path, const char* key, std::vector<T>& out,
            bool& present, Parse parse) {
    if (!j.contains(key)) return;
    present = true;
    const json& v = j.at(key);
    const std::string p = join(path, key);
    if (!v.is_array()) return fail(p, "expected an array");
    if (v.empty()) return fail(p, "sweep axis must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      T item{};
      if (parse(v[i], p + "[" + std::to_string(i) + "]", item)) out.push_back(item);
    }
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  template <class Body>
  void section(const json& j, const std::string& path, const char* key,
               std::initializer_list<const char*> keys, Body body) {
    if (!j.contains(key)) return;
    const std::string p = join(path, key);
    if (!object(j.at(key), p)) return;
    known_keys(j.at(key), p, keys);
    body(j.at(key), p);
  }

  std::vector<std::string>& problems_;
};

}  // namespace detail

/// Parses a SimConfig object on top of the defaults. Problems are appended.
inline SimConfig config_from_json(const json& j, std::vector<std::string>& problems,
                                  const std::string& path = "config") {
  SimConfig c;
  detail::Reader(problems).config(j, path, c);
  return c;
}

struct ScenarioFile {
  std::vector<Scenario> scenarios;
};

/// Parses and validates a scenario document. Every violation is reported as
/// "<field path>: <message>"; an empty list means the document is valid.
inline std::vector<std::string> parse_scenarios(const json& doc, ScenarioFile& out) {
  std::vector<std::string> problems;
  detail::Reader r(problems);
  if (!r.object(doc, "<root>")) return problems;
  r.known_keys(doc, "", {"schema", "scenarios"});
  if (!doc.contains("schema")) {
    r.fail("schema", "missing; expected 1");
  } else if (!doc.at("schema").is_number_integer() || doc.at("schema").get<int>() != kScenarioSchema) {
    r.fail("schema", "unsupported schema version; expected 1");
  }
  if (!doc.contains("scenarios") || !doc.at("scenarios").is_array()) {
    r.fail("scenarios", "expected an array of scenarios");
    return problems;
  }
  if (doc.at("scenarios").empty()) r.fail("scenarios", "must contain at least one scenario");

  std::set<std::string> names;
  const json& list = doc.at("scenarios");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string p = "scenarios[" + std::to_string(i) + "]";
    const json& s = list[i];
    if (!r.object(s, p)) continue;
    r.known_keys(s, p, {"name", "config", "sweep", "cluster_sweep"});
    Scenario sc;
    if (!s.contains("name") || !s.at("name").is_string() || s.at("name").get<std::string>().empty()) {
      r.fail(p + ".name", "expected a non-empty string");
    } else {
      sc.name = s.at("name").get<std::string>();
      if (sc.name.find_first_of("/\\") != std::string::npos) {
        r.fail(p + ".name", "must not contain path separators");
      }
      if (!names.insert(sc.name).second) r.fail(p + ".name", "duplicate scenario name '" + sc.name + "'");
    }
    if (s.contains("config")) {
      r.config(s.at("config"), p + ".config", sc.config);
    }
    for (const auto& problem : validate(sc.config)) problems.push_back(p + ".config." + problem);

    if (s.contains("sweep")) {
      const std::string sp = p + ".sweep";
      const json& g = s.at("sweep");
      if (r.object(g, sp)) {
        r.known_keys(g, sp, {"seeds", "topologies", "rates", "lambdas"});
        SweepGrid grid;
        bool any = false;
        r.list(g, sp, "seeds", grid.seeds, any, [&](const json& v, const std::string& ip, std::uint64_t& x) {
          if (!v.is_number_unsigned()) {
            r.fail(ip, "expected a non-negative integer seed");
            return false;
          }
          x = v.get<std::uint64_t>();
          return true;
        });
        r.list(g, sp, "topologies", grid.topologies, any,
               [&](const json& v, const std::string& ip, TopologyConfig& t) {
                 const std::size_t before = problems.size();
                 r.topology(v, ip, t);
                 return problems.size() == before;
               });
        r.list(g, sp, "rates", grid.rates, any, [&](const json& v, const std::string& ip, double& x) {
          if (!v.is_number() || !(v.get<double>() > 0.0)) {
            r.fail(ip, "rate must be a positive number of bits per second");
            return false;
          }
          x = v.get<double>();
          return true;
        });
        r.list(g, sp, "lambdas", grid.lambdas, any, [&](const json& v, const std::string& ip, double& x) {
          if (!v.is_number() || !(v.get<double>() >= 0.0)) {
            r.fail(ip, "lambda must be a non-negative number");
            return false;
          }
          x = v.get<double>();
          return true;
        });
        if (!any) r.fail(sp, "sweep grid is empty; give at least one of seeds, topologies, rates, lambdas");
        sc.sweep = grid;
      }
    }

    if (s.contains("cluster_sweep")) {
      const std::string cp = p + ".cluster_sweep";
      const json& c = s.at("cluster_sweep");
      if (r.object(c, cp)) {
        r.known_keys(c, cp, {"viewers", "cluster_counts"});
        ClusterSweepSpec spec;
        r.number(c, cp, "viewers", spec.viewers);
        if (spec.viewers < 1) r.fail(cp + ".viewers", "must be at least 1");
        bool present = false;
        r.list(c, cp, "cluster_counts", spec.cluster_counts, present,
               [&](const json& v, const std::string& ip, std::size_t& x) {
                 if (!v.is_number_unsigned()) {
                   r.fail(ip, "expected a non-negative integer");
                   return false;
                 }
                 x = v.get<std::size_t>();
                 return true;
               });
        if (!present) r.fail(cp + ".cluster_counts", "missing");
        sc.cluster_sweep = spec;
      }
    }
    out.scenarios.push_back(std::move(sc));
  }
  // Topology bounds are checked both structurally and by validate().
  std::vector<std::string> unique;
  std::set<std::string> seen;
  for (auto& p : problems) {
    if (seen.insert(p).second) unique.push_back(std::move(p));
  }
  return unique;
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": malformed JSON: " + e.what());
  }
}

/// Lists every constraint violation in a scenario file without running it.
/// Throws IoError if the file cannot be read.
inline std::vector<std::string> validate_scenario(const std::filesystem::path& path) {
  json doc;
  try {
    doc = read_json_file(path);
  } catch (const std::invalid_argument& e) {
    return {e.what()};
  }
  ScenarioFile file;
  return parse_scenarios(doc, file);
}

inline std::string rate_label(double bps) {
  return format_double(bps / 1e9) + "gbps";
}

/// Expands a scenario's sweep grid into concrete runs. Axes present in the
/// grid are combined as a cartesian product and each appears in the run name.
inline std::vector<RunPoint> expand(const Scenario& sc) {
  std::vector<RunPoint> points{RunPoint{sc.name, sc.config, sc.cluster_sweep}};
  if (!sc.sweep) return points;
  const SweepGrid& g = sc.sweep.value();

  auto apply = [&](auto const& axis, auto&& mutate) {
    if (axis.empty()) return;
    std::vector<RunPoint> next;
    next.reserve(points.size() * axis.size());
    for (const auto& base : points) {
      for (const auto& value : axis) {
        RunPoint p = base;
        mutate(p, value);
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  };
  apply(g.topologies, [](RunPoint& p, const TopologyConfig& t) {
    p.config.topology = t;
    p.name += "-" + std::to_string(t.num_app_servers) + "x" + std::to_string(t.db_per_app);
  });
  apply(g.rates, [](RunPoint& p, double rate) {
    p.config.stream.size_bits = rate * p.config.stream.duration_s;
    p.name += "-" + rate_label(rate);
  });
  apply(g.lambdas, [](RunPoint& p, double lambda) {
    p.config.cache.lambda = lambda;
    p.name += "-lambda" + format_double(lambda);
  });
  apply(g.seeds, [](RunPoint& p, std::uint64_t seed) {
    p.config.seed = seed;
    p.name += "-seed" + std::to_string(seed);
  });
  return points;
}

// ---------------------------------------------------------------------------
// Result serialization

inline json metrics_to_json(const SimMetrics& m) {
  json hist = json::array();
  for (const auto& [hop, count] : m.hop_histogram) hist.push_back({{"hop", hop}, {"count", count}});
  json sessions = json::array();
  for (const auto& s : m.sessions) {
    sessions.push_back({{"index", s.index},
                        {"start_tick", s.start_tick},
                        {"requests", s.requests},
                        {"cache_hits", s.cache_hits},
                        {"admitted", s.admitted},
                        {"dropped", s.dropped},
                        {"aggregate_bps", s.aggregate_bps},
                        {"capacity_bps", s.capacity_bps}});
  }
  return json{{"hop_histogram", hist},
              {"total_requests", m.total_requests},
              {"cache_hits", m.cache_hits},
              {"cache_misses", m.cache_misses},
              {"admitted", m.admitted},
              {"dropped", m.dropped},
              {"served", m.served},
              {"expired", m.expired},
              {"not_found", m.not_found},
              {"queue_overflow", m.queue_overflow},
              {"hit_ratio", m.hit_ratio},
              {"score", m.score},
              {"sessions", sessions}};
}

/// Inverse of metrics_to_json. Throws nlohmann::json exceptions on a
/// malformed document.
inline SimMetrics metrics_from_json(const json& j) {
  SimMetrics m;
  for (const auto& h : j.at("hop_histogram")) {
    m.hop_histogram[h.at("hop").get<std::uint32_t>()] = h.at("count").get<std::uint64_t>();
  }
  m.total_requests = j.at("total_requests").get<std::uint64_t>();
  m.cache_hits = j.at("cache_hits").get<std::uint64_t>();
  m.cache_misses = j.at("cache_misses").get<std::uint64_t>();
  m.admitted = j.at("admitted").get<std::uint64_t>();
  m.dropped = j.at("dropped").get<std::uint64_t>();
  m.served = j.at("served").get<std::uint64_t>();
  m.expired = j.at("expired").get<std::uint64_t>();
  m.not_found = j.at("not_found").get<std::uint64_t>();
  m.queue_overflow = j.at("queue_overflow").get<std::uint64_t>();
  m.hit_ratio = j.at("hit_ratio").get<double>();
  m.score = j.at("score").get<std::uint64_t>();
  for (const auto& s : j.at("sessions")) {
    SessionStats st;
    st.index = s.at("index").get<std::size_t>();
    st.start_tick = s.at("start_tick").get<Tick>();
    st.requests = s.at("requests").get<std::uint64_t>();
    st.cache_hits = s.at("cache_hits").get<std::uint64_t>();
    st.admitted = s.at("admitted").get<std::uint64_t>();
    st.dropped = s.at("dropped").get<std::uint64_t>();
    st.aggregate_bps = s.at("aggregate_bps").get<double>();
    st.capacity_bps = s.at("capacity_bps").get<double>();
    m.sessions.push_back(st);
  }
  return m;
}

inline std::string hops_csv(const SimMetrics& m) {
  std::ostringstream out;
  out << "hop,count\n";
  for (const auto& [hop, count] : m.hop_histogram) out << hop << ',' << count << '\n';
  return out.str();
}

inline std::string bandwidth_csv(const SimMetrics& m) {
  std::ostringstream out;
  out << "session,start_tick,requests,cache_hits,hit_ratio,admitted,dropped,aggregate_bps,capacity_bps\n";
  for (const auto& s : m.sessions) {
    out << s.index << ',' << s.start_tick << ',' << s.requests << ',' << s.cache_hits << ','
        << format_double(s.hit_ratio()) << ',' << s.admitted << ',' << s.dropped << ','
        << format_double(s.aggregate_bps) << ',' << format_double(s.capacity_bps) << '\n';
  }
  return out.str();
}

inline std::string clusters_csv(const std::vector<ClusterPoint>& series) {
  std::ostringstream out;
  out << "clusters,rate_bps,streams,total_bps,per_viewer_bps\n";
  for (const auto& p : series) {
    out << p.clusters << ',' << format_double(p.rate_bps) << ',' << p.streams << ','
        << format_double(p.total_bps) << ',' << format_double(p.per_viewer_bps) << '\n';
  }
  return out.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

struct RunOptions {
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  OutputFormat format = OutputFormat::both;
  std::ostream* log = nullptr;
};

/// Executes one run point and writes its result files into `out_dir`.
inline void execute(const RunPoint& point, const std::filesystem::path& out_dir, OutputFormat format) {
  const SimMetrics metrics = run(point.config);
  std::optional<std::vector<ClusterPoint>> clusters;
  if (point.cluster_sweep) {
    clusters = run_cluster_sweep(point.config, point.cluster_sweep->cluster_counts,
                                 point.config.stream.rate(), point.cluster_sweep->viewers);
  }
  if (format != OutputFormat::csv) {
    json doc{{"schema", kScenarioSchema},
             {"name", point.name},
             {"config", to_json(point.config)},
             {"metrics", metrics_to_json(metrics)}};
    if (clusters) {
      json series = json::array();
      for (const auto& p : *clusters) {
        series.push_back({{"clusters", p.clusters},
                          {"rate_bps", p.rate_bps},
                          {"streams", p.streams},
                          {"total_bps", p.total_bps},
                          {"per_viewer_bps", p.per_viewer_bps}});
      }
      doc["clusters"] = series;
    }
    write_file(out_dir / (point.name + "-metrics.json"), doc.dump(2) + "\n");
  }
  if (format != OutputFormat::json) {
    write_file(out_dir / (point.name + "-hops.csv"), hops_csv(metrics));
    write_file(out_dir / (point.name + "-bandwidth.csv"), bandwidth_csv(metrics));
    if (clusters) write_file(out_dir / (point.name + "-clusters.csv"), clusters_csv(*clusters));
  }
}

/**
 * @brief Validates and runs every scenario in a file, writing results into
 * `out_dir`.
 *
 * Nothing is written unless the whole file validates. Returns kExitOk,
 * kExitValidation (diagnostics on `err`) or kExitIo.
 */
inline int run_scenario(const std::filesystem::path& path, const std::filesystem::path& out_dir,
                        const RunOptions& options = {}, std::ostream& err = std::cerr) {
  json doc;
  try {
    doc = read_json_file(path);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  ScenarioFile file;
  const auto problems = parse_scenarios(doc, file);
  if (!problems.empty()) {
    for (const auto& p : problems) err << path.string() << ": " << p << '\n';
    return kExitValidation;
  }

  std::vector<RunPoint> points;
  for (auto sc : file.scenarios) {
    if (options.seed) {
      sc.config.seed = *options.seed;
      if (sc.sweep) sc.sweep->seeds.clear();
    }
    for (auto& p : expand(sc)) points.push_back(std::move(p));
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    err << "error: cannot create output directory " << out_dir.string() << '\n';
    return kExitIo;
  }

  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::vector<std::string> io_errors;
  std::vector<std::string> other_errors;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        execute(points[i], out_dir, options.format);
        if (options.log) {
          std::lock_guard lock(mu);
          *options.log << "ran " << points[i].name << '\n';
        }
      } catch (const IoError& e) {
        std::lock_guard lock(mu);
        io_errors.push_back(e.what());
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        other_errors.push_back(points[i].name + ": " + e.what());
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(points.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : io_errors) err << "error: " << e << '\n';
  for (const auto& e : other_errors) err << "error: " << e << '\n';
  if (!io_errors.empty()) return kExitIo;
  if (!other_errors.empty()) return kExitValidation;
  return kExitOk;
}

}  // namespace vodsim
