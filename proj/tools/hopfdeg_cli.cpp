// hopfdeg command-line front end. Talks to the library only through the C API.
#include "hopfdeg/hopfdeg.h"
#include "run_config.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

using nlohmann::json;
namespace fs = std::filesystem;
namespace cli = hopfdeg::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInconclusive = 2;

struct MapDeleter {
  void operator()(hd_map* m) const { hd_map_free(m); }
};
using MapPtr = std::unique_ptr<hd_map, MapDeleter>;

struct CString {
  char* p = nullptr;
  ~CString() { hd_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct Failure {
  int exit_code;
  std::string message;
};

void check(hd_status s, const char* what) {
  if (s == HD_OK || s == HD_INCONCLUSIVE) return;
  const int code = s == HD_ERR_NOT_REGULAR ? kExitInconclusive : kExitConfig;
  throw Failure{code, std::string(what) + " failed (" + hd_status_name(s) + "): " + hd_last_error()};
}

std::string csv_cell(const json& v) {
  std::string s;
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<json>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + csv_cell(header[i]);
  out += "\r\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + csv_cell(r[i]);
    out += "\r\n";
  }
  return out;
}

std::vector<json> invariant_row(const json& r) {
  return {r["method"], r["raw"], r["rounded"], r["residual"], r["conclusive"]};
}

struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
};

void write_outputs(const std::string& dir, const Outputs& o) {
  if (dir.empty() || o.files.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{kExitConfig, "cannot create output directory '" + dir + "': " + ec.message()};
  for (const auto& [name, text] : o.files) {
    const fs::path path = fs::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw Failure{kExitConfig, "cannot write '" + path.string() + "'"};
  }
}

json with_seed(json section, std::uint64_t seed) {
  section["seed"] = seed;
  return section;
}

int run(const cli::RunConfig& cfg, bool dry_run) {
  check(hd_set_threads(cfg.threads), "setting threads");
  MapPtr map;
  if (!cfg.map.is_null()) {
    hd_map* m = nullptr;
    check(hd_map_create(cfg.map.dump().c_str(), &m), "map construction");
    map.reset(m);
  }
  json meta = {{"threads", hd_threads()}, {"seed", cfg.seed}, {"schema_version", cli::kSchemaVersion},
               {"version", hd_version()}};
  if (dry_run) {
    std::cout << json{{"dry_run", true}, {"config", cfg.resolved()}, {"metadata", meta}}.dump() << "\n";
    return kExitOk;
  }

  Outputs out;
  json line;
  hd_status status = HD_OK;
  const std::string& c = cfg.command;
  if (c == "gen_map") {
    CString d;
    check(hd_map_descriptor(map.get(), &d.p), "gen_map");
    line = {{"descriptor", json::parse(d.str())},
            {"source_dim", hd_map_source_dim(map.get())},
            {"target_dim", hd_map_target_dim(map.get())}};
    out.files.push_back({"map.json", json::parse(d.str()).dump(2) + "\n"});
  } else if (c == "degree" || c == "hopf") {
    CString r;
    const std::string opts = with_seed(cfg.section, cfg.seed).dump();
    status = c == "degree" ? hd_degree(map.get(), opts.c_str(), &r.p) : hd_hopf(map.get(), opts.c_str(), &r.p);
    check(status, c.c_str());
    line = json::parse(r.str());
    const char* a = c == "degree" ? "integral" : "whitehead";
    const char* b = c == "degree" ? "count" : "linking";
    if (cfg.format == "csv") {
      out.files.push_back({c + ".csv", csv_table({"method", "raw", "rounded", "residual", "conclusive"},
                                                 {invariant_row(line[a]), invariant_row(line[b])})});
    }
  } else if (c == "seminorm") {
    CString r;
    check(hd_seminorm(map.get(), with_seed(cfg.section, cfg.seed).dump().c_str(), &r.p), "seminorm");
    line = json::parse(r.str());
    if (cfg.format == "csv") {
      std::vector<std::string> header;
      std::vector<json> row;
      for (const char* k : {"s", "p", "metric", "method", "value", "std_error", "p_power", "p_power_std_error",
                            "samples"}) {
        header.push_back(k);
        row.push_back(line.value(k, json()));
      }
      out.files.push_back({"seminorm.csv", csv_table(header, {row})});
    }
  } else {
    const json& e = cfg.section;
    json config = e.value("parameters", json::object());
    config["experiment"] = e["name"];
    const json options = with_seed(e.value("options", json::object()), cfg.seed);
    CString summary, csv, plot;
    check(hd_experiment(config.dump().c_str(), options.dump().c_str(), &summary.p, &csv.p, &plot.p), "experiment");
    line = json::parse(summary.str());
    const std::string id = e["name"];
    if (cfg.format == "csv") out.files.push_back({id + ".csv", csv.str()});
    if (cfg.plot) {
      if (cfg.format != "csv") out.files.push_back({id + ".csv", csv.str()});
      out.files.push_back({id + "_plot.py", plot.str()});
    }
  }
  line["command"] = c;
  line["metadata"] = line.contains("metadata") ? json(line["metadata"]) : json::object();
  line["metadata"].update(meta);
  if (cfg.format == "json" || c == "experiment" || c == "gen_map") {
    if (c != "gen_map") out.files.push_back({c == "experiment" ? cfg.section["name"].get<std::string>() + ".json"
                                                               : c + ".json",
                                             line.dump(2) + "\n"});
  }
  write_outputs(cfg.out_dir, out);
  std::cout << line.dump() << "\n";
  if (status == HD_INCONCLUSIVE) {
    std::cerr << "hopfdeg: " << c << " inconclusive: the methods did not both certify the same integer\n";
    return kExitInconclusive;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hopfdeg: degrees, Hopf invariants and fractional Sobolev seminorms of sphere maps"};
  std::string config_path;
  cli::Overrides ov;
  std::string out_dir, format;
  int threads = -1;
  std::uint64_t seed = 0;
  bool dry_run = false;
  app.add_option("--config", config_path, "Run configuration (JSON)")->required();
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  auto* fmt_opt = app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  auto* thr_opt = app.add_option("--threads", threads, "Worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Random seed");
  app.add_flag("--dry-run", dry_run, "Print the resolved configuration and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  if (*out_opt) ov.out_dir = out_dir;
  if (*fmt_opt) ov.format = format;
  if (*thr_opt) ov.threads = threads;
  if (*seed_opt) ov.seed = seed;

  try {
    const cli::RunConfig cfg = cli::load_config(config_path, ov);
    return run(cfg, dry_run);
  } catch (const cli::ConfigError& e) {
    std::cerr << "hopfdeg: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Failure& f) {
    std::cerr << "hopfdeg: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "hopfdeg: " << e.what() << "\n";
    return kExitConfig;
  }
}
