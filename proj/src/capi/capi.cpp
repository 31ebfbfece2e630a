#include "hopfdeg/hopfdeg.h"

#include "hopfdeg/experiments.hpp"
#include "hopfdeg/invariants.hpp"
#include "hopfdeg/mapzoo.hpp"
#include "hopfdeg/parallel.hpp"
#include "hopfdeg/sobolev.hpp"

#include <cstdlib>
#include <cstring>
#include <set>
#include <string>

using nlohmann::json;
using namespace hopfdeg;

struct hd_map {
  SphereMap map;
};

namespace {

thread_local std::string g_last_error;

hd_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return HD_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return HD_ERR_DIMENSION;
    case ErrorCode::Unsupported: return HD_ERR_UNSUPPORTED;
    case ErrorCode::Inconclusive: return HD_INCONCLUSIVE;
    case ErrorCode::SupportViolation: return HD_ERR_SUPPORT;
    case ErrorCode::NotRegular: return HD_ERR_NOT_REGULAR;
    case ErrorCode::Config: return HD_ERR_CONFIG;
    case ErrorCode::Io: return HD_ERR_IO;
  }
  return HD_ERR_INTERNAL;
}

template <class Body>
hd_status guarded(Body&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const json::exception& e) {
    g_last_error = std::string("invalid JSON: ") + e.what();
    return HD_ERR_CONFIG;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HD_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_options(const char* text, const std::set<std::string>& allowed, const char* where) {
  if (!text || !*text) return json::object();
  json j = json::parse(text);
  require(j.is_object(), ErrorCode::Config, std::string(where) + " options must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    require(allowed.count(it.key()) > 0, ErrorCode::Config,
            "unknown key '" + it.key() + "' in " + where + " options");
  }
  return j;
}

template <class T>
T opt(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  try {
    return j[key].get<T>();
  } catch (const json::exception&) {
    fail(ErrorCode::Config, std::string("option '") + key + "' has the wrong type");
  }
}

Vec vec_opt(const json& j, const char* key, int dim) {
  const auto v = opt<std::vector<double>>(j, key, {});
  require(static_cast<int>(v.size()) == dim, ErrorCode::Config,
          std::string("option '") + key + "' must have " + std::to_string(dim) + " entries");
  Vec out(dim);
  for (int i = 0; i < dim; ++i) out[i] = v[i];
  return out;
}

Stencil parse_stencil(const std::string& s) {
  if (s == "centered2") return Stencil::Centered2;
  if (s == "centered4") return Stencil::Centered4;
  if (s == "spectral") return Stencil::Spectral;
  fail(ErrorCode::Config, "unknown stencil '" + s + "'");
}

HopfGrid parse_grid(const json& o) {
  HopfGrid g;
  g.n = opt<int>(o, "N", g.n);
  g.half_width = opt<double>(o, "L", g.half_width);
  g.stencil = parse_stencil(opt<std::string>(o, "stencil", "spectral"));
  g.cap_radius = opt<double>(o, "cap_radius", 0.0);
  return g;
}

hd_status write_out(char** out, const json& j) {
  require(out != nullptr, ErrorCode::InvalidArgument, "result pointer is NULL");
  *out = dup_string(j.dump());
  return HD_OK;
}

}  // namespace

extern "C" {

const char* hd_version(void) { return HOPFDEG_VERSION; }

const char* hd_status_name(hd_status s) {
  switch (s) {
    case HD_OK: return "ok";
    case HD_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case HD_ERR_DIMENSION: return "dimension_mismatch";
    case HD_ERR_UNSUPPORTED: return "unsupported";
    case HD_INCONCLUSIVE: return "inconclusive";
    case HD_ERR_SUPPORT: return "support_violation";
    case HD_ERR_NOT_REGULAR: return "not_regular";
    case HD_ERR_CONFIG: return "config";
    case HD_ERR_IO: return "io";
    case HD_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* hd_last_error(void) { return g_last_error.c_str(); }

void hd_string_free(char* s) { std::free(s); }

hd_status hd_set_threads(int threads) {
  return guarded([&] {
    require(threads >= 0, ErrorCode::InvalidArgument, "thread count must be >= 0");
    set_num_threads(threads);
    return HD_OK;
  });
}

int hd_threads(void) { return num_threads(); }

hd_status hd_map_create(const char* family_json, hd_map** out) {
  return guarded([&] {
    require(family_json && out, ErrorCode::InvalidArgument, "NULL argument");
    *out = nullptr;
    auto m = std::make_unique<hd_map>();
    m->map = make_map(json::parse(family_json));
    *out = m.release();
    return HD_OK;
  });
}

void hd_map_free(hd_map* map) { delete map; }

int hd_map_source_dim(const hd_map* map) { return map ? map->map.source_dim() : -1; }
int hd_map_target_dim(const hd_map* map) { return map ? map->map.target_dim() : -1; }

hd_status hd_map_eval(const hd_map* map, const double* point, double* out) {
  return guarded([&] {
    require(map && point && out, ErrorCode::InvalidArgument, "NULL argument");
    const int m = map->map.source_dim();
    Vec p(m + 1);
    for (int i = 0; i <= m; ++i) p[i] = point[i];
    const Vec v = map->map(UnitVector(p).coords());
    for (int i = 0; i < v.size(); ++i) out[i] = v[i];
    return HD_OK;
  });
}

hd_status hd_map_descriptor(const hd_map* map, char** json_out) {
  return guarded([&] {
    require(map != nullptr, ErrorCode::InvalidArgument, "NULL map");
    return write_out(json_out, map->map.descriptor());
  });
}

hd_status hd_degree(const hd_map* map, const char* options_json, char** result_json) {
  return guarded([&] {
    require(map != nullptr, ErrorCode::InvalidArgument, "NULL map");
    const json o = parse_options(options_json, {"resolution", "value", "seed"}, "degree");
    const SphereMap& f = map->map;
    const int n = f.source_dim();
    require(f.target_dim() == n + 1 && f.sphere_valued(), ErrorCode::DimensionMismatch,
            "degree needs a sphere-valued map S^n -> S^n");
    const int res = opt<int>(o, "resolution", 0) > 0 ? opt<int>(o, "resolution", 0) : degree_resolution(f, n);
    const auto seed = opt<std::uint64_t>(o, "seed", 1);
    const InvariantResult integral = brouwer_degree_integral(f, make_quadrature(n, res));
    CountOptions co;
    co.resolution = res;
    InvariantResult count;
    if (o.contains("value")) {
      count = brouwer_degree_count(f, UnitVector(vec_opt(o, "value", n + 1)), co);
    } else {
      count = brouwer_degree_count_auto(f, seed, co);
    }
    const bool agree = integral.conclusive && count.conclusive && integral.rounded == count.rounded;
    json out = {{"family", f.descriptor()},
                {"integral", integral.to_json()},
                {"count", count.to_json()},
                {"rounded", integral.rounded},
                {"agreement", agree}};
    write_out(result_json, out);
    return agree ? HD_OK : HD_INCONCLUSIVE;
  });
}

hd_status hd_hopf(const hd_map* map, const char* options_json, char** result_json) {
  return guarded([&] {
    require(map != nullptr, ErrorCode::InvalidArgument, "NULL map");
    const json o = parse_options(options_json,
                                 {"N", "L", "stencil", "cap_radius", "p", "q", "seed", "min_separation_cells"},
                                 "hopf");
    const SphereMap& f = map->map;
    const HopfGrid grid = parse_grid(o);
    LinkingOptions lo;
    lo.min_separation_cells = opt<double>(o, "min_separation_cells", lo.min_separation_cells);
    const InvariantResult w = hopf_invariant_whitehead(f, grid);
    InvariantResult l;
    if (o.contains("p") || o.contains("q")) {
      l = hopf_invariant_linking(f, UnitVector(vec_opt(o, "p", 3)), UnitVector(vec_opt(o, "q", 3)), grid, lo);
    } else {
      l = hopf_invariant_linking_auto(f, grid, opt<std::uint64_t>(o, "seed", 1), lo);
    }
    const bool agree = w.conclusive && l.conclusive && w.rounded == l.rounded;
    json out = {{"family", f.descriptor()},
                {"whitehead", w.to_json()},
                {"linking", l.to_json()},
                {"rounded", w.rounded},
                {"agreement", agree}};
    write_out(result_json, out);
    return agree ? HD_OK : HD_INCONCLUSIVE;
  });
}

hd_status hd_seminorm(const hd_map* map, const char* options_json, char** result_json) {
  return guarded([&] {
    require(map != nullptr, ErrorCode::InvalidArgument, "NULL map");
    const json o = parse_options(options_json, {"s", "p", "method", "resolution", "samples", "seed", "metric"},
                                 "seminorm");
    const SphereMap& f = map->map;
    const int m = f.source_dim();
    SeminormSpec spec;
    spec.dim = m;
    spec.s = opt<double>(o, "s", 0.5);
    spec.p = opt<double>(o, "p", m / spec.s);
    const std::string metric = opt<std::string>(o, "metric", "chordal");
    require(metric == "chordal" || metric == "geodesic", ErrorCode::Config, "metric must be chordal or geodesic");
    spec.metric = metric == "geodesic" ? Metric::Geodesic : Metric::Chordal;
    std::string method = opt<std::string>(o, "method", "auto");
    require(method == "auto" || method == "pair" || method == "mc" || method == "gradient", ErrorCode::Config,
            "method must be auto, pair, mc or gradient");
    if (method == "auto") method = spec.s == 1.0 ? "gradient" : (m == 1 ? "pair" : "mc");
    const int res = opt<int>(o, "resolution", m == 1 ? 4096 : 64);
    SeminormEstimate e;
    if (method == "gradient") {
      e = sobolev_seminorm_s1(f, spec.p, make_quadrature(m, res));
    } else if (method == "pair") {
      e = fractional_seminorm(f, spec, make_quadrature(m, res));
    } else {
      e = fractional_seminorm_mc(f, spec, opt<std::uint64_t>(o, "seed", 1), opt<std::size_t>(o, "samples", 1000000));
    }
    json out = e.to_json();
    out["family"] = f.descriptor();
    out["s"] = spec.s;
    out["p"] = spec.p;
    out["metric"] = metric;
    return write_out(result_json, out);
  });
}

hd_status hd_experiment(const char* config_json, const char* options_json, char** summary_json, char** csv_out,
                        char** plot_out) {
  return guarded([&] {
    require(config_json != nullptr, ErrorCode::InvalidArgument, "NULL config");
    const json o = parse_options(
        options_json, {"seed", "mc_samples", "N", "L", "stencil", "hopf_max_computed_k", "commutator_amplitude"},
        "experiment");
    ExperimentOptions eo;
    eo.seed = opt<std::uint64_t>(o, "seed", eo.seed);
    eo.mc_samples = opt<std::size_t>(o, "mc_samples", eo.mc_samples);
    eo.grid = parse_grid(o);
    eo.hopf_max_computed_k = opt<int>(o, "hopf_max_computed_k", eo.hopf_max_computed_k);
    eo.commutator_amplitude = opt<double>(o, "commutator_amplitude", eo.commutator_amplitude);
    const ExperimentReport rep = run_experiment(json::parse(config_json), eo);
    if (csv_out) *csv_out = dup_string(rep.to_csv());
    if (plot_out) *plot_out = dup_string(rep.plot_script(rep.id + ".csv"));
    return write_out(summary_json, rep.to_json());
  });
}

}  // extern "C"
