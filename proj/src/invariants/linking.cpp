#include "chart.hpp"

#include "hopfdeg/parallel.hpp"
#include "hopfdeg/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace hopfdeg {

namespace {

using Key = std::array<std::uint64_t, 3>;

struct Crossing {
  Key key;
  Eigen::Vector3d pos;
};

struct Segment {
  Crossing from;
  Crossing to;
};

// Kuhn triangulation: the six monotone lattice paths from corner 000 to 111.
constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

struct LevelData {
  const GridSpec* spec;
  std::vector<double> u, v, w;
};

// Zero of the linear interpolant of (u, v) on the face with sorted vertex ids,
// restricted to the p-sheet (w > 0). Deterministic in the face, so both tets
// sharing it agree.
bool face_crossing(const LevelData& d, const Key& ids, Eigen::Vector3d& out) {
  const std::uint64_t a = ids[0], b = ids[1], c = ids[2];
  const double u0 = d.u[a], v0 = d.v[a];
  const double e1u = d.u[b] - u0, e1v = d.v[b] - v0;
  const double e2u = d.u[c] - u0, e2v = d.v[c] - v0;
  const double det = e1u * e2v - e1v * e2u;
  if (det == 0.0) return false;
  const double l1 = (-u0 * e2v + v0 * e2u) / det;
  const double l2 = (-e1u * v0 + e1v * u0) / det;
  const double l0 = 1.0 - l1 - l2;
  if (l0 < 0.0 || l1 < 0.0 || l2 < 0.0) return false;
  if (l0 * d.w[a] + l1 * d.w[b] + l2 * d.w[c] <= 0.0) return false;
  const int n = d.spec->n;
  auto pos = [&](std::uint64_t id) {
    return Eigen::Vector3d(d.spec->coord(static_cast<int>(id / (n * n))),
                           d.spec->coord(static_cast<int>((id / n) % n)), d.spec->coord(static_cast<int>(id % n)));
  };
  out = l0 * pos(a) + l1 * pos(b) + l2 * pos(c);
  return true;
}

std::vector<FiberCurve> trace(const detail::Chart& chart, const std::vector<double>& samples, const Vec& p,
                              const HopfGrid& grid, const LinkingOptions& options) {
  const GridSpec& spec = chart.spec;
  const int n = spec.n;
  const std::size_t total = spec.points();
  const Mat frame = tangent_frame(p);
  const Eigen::Vector3d e1 = frame.col(0), e2 = frame.col(1), pp = p;
  LevelData d{&spec, std::vector<double>(total), std::vector<double>(total), std::vector<double>(total)};
  for (std::size_t i = 0; i < total; ++i) {
    const Eigen::Vector3d g(samples[3 * i], samples[3 * i + 1], samples[3 * i + 2]);
    d.u[i] = g.dot(e1);
    d.v[i] = g.dot(e2);
    d.w[i] = g.dot(pp);
  }

  std::vector<std::vector<Segment>> slabs(n - 1);
  std::vector<int> branching(n - 1, 0);
  parallel_for(static_cast<std::size_t>(n - 1), [&](std::size_t si) {
    const int i = static_cast<int>(si);
    for (int j = 0; j + 1 < n; ++j) {
      for (int k = 0; k + 1 < n; ++k) {
        std::uint64_t corner[8];
        double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300, wmax = -1e300;
        for (int c = 0; c < 8; ++c) {
          const std::uint64_t id = (static_cast<std::uint64_t>(i + (c >> 2)) * n + (j + ((c >> 1) & 1))) * n +
                                   (k + (c & 1));
          corner[c] = id;
          umin = std::min(umin, d.u[id]);
          umax = std::max(umax, d.u[id]);
          vmin = std::min(vmin, d.v[id]);
          vmax = std::max(vmax, d.v[id]);
          wmax = std::max(wmax, d.w[id]);
        }
        if (umin > 0.0 || umax < 0.0 || vmin > 0.0 || vmax < 0.0 || wmax <= 0.0) continue;
        for (const auto& perm : kPerms) {
          int bits[4] = {0, 0, 0, 0};
          for (int s = 1; s < 4; ++s) bits[s] = bits[s - 1] | (4 >> perm[s - 1]);
          std::uint64_t tet[4];
          for (int s = 0; s < 4; ++s) tet[s] = corner[bits[s]];
          std::vector<Crossing> hits;
          for (int skip = 0; skip < 4; ++skip) {
            Key key{};
            int q = 0;
            for (int s = 0; s < 4; ++s) {
              if (s != skip) key[q++] = tet[s];
            }
            std::sort(key.begin(), key.end());
            Eigen::Vector3d x;
            if (face_crossing(d, key, x)) hits.push_back({key, x});
          }
          if (hits.empty()) continue;
          if (hits.size() != 2) {
            ++branching[si];
            continue;
          }
          // Orientation from grad u x grad v of the linear interpolant.
          Eigen::Matrix3d e;
          Eigen::Vector3d du, dv;
          auto pos = [&](std::uint64_t id) {
            return Eigen::Vector3d(spec.coord(static_cast<int>(id / (n * n))),
                                   spec.coord(static_cast<int>((id / n) % n)),
                                   spec.coord(static_cast<int>(id % n)));
          };
          for (int s = 1; s < 4; ++s) {
            e.row(s - 1) = (pos(tet[s]) - pos(tet[0])).transpose();
            du[s - 1] = d.u[tet[s]] - d.u[tet[0]];
            dv[s - 1] = d.v[tet[s]] - d.v[tet[0]];
          }
          const Eigen::Vector3d gu = e.partialPivLu().solve(du);
          const Eigen::Vector3d gv = e.partialPivLu().solve(dv);
          const Eigen::Vector3d t = gu.cross(gv);
          if ((hits[1].pos - hits[0].pos).dot(t) >= 0.0) {
            slabs[si].push_back({hits[0], hits[1]});
          } else {
            slabs[si].push_back({hits[1], hits[0]});
          }
        }
      }
    }
  }, 1);

  int branch_total = 0;
  for (int b : branching) branch_total += b;
  require(branch_total == 0, ErrorCode::Inconclusive,
          "fiber extraction found " + std::to_string(branch_total) + " tetrahedra with an odd crossing count");

  std::map<Key, int> ids;
  std::vector<Eigen::Vector3d> points;
  std::vector<int> next, incoming;
  auto id_of = [&](const Crossing& c) {
    auto it = ids.find(c.key);
    if (it != ids.end()) return it->second;
    const int id = static_cast<int>(points.size());
    ids.emplace(c.key, id);
    points.push_back(c.pos);
    next.push_back(-1);
    incoming.push_back(0);
    return id;
  };
  for (const auto& slab : slabs) {
    for (const Segment& s : slab) {
      const int a = id_of(s.from);
      const int b = id_of(s.to);
      require(next[a] == -1, ErrorCode::Inconclusive, "fiber branches: a crossing has two successors");
      next[a] = b;
      ++incoming[b];
    }
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(next[i] >= 0 && incoming[i] == 1, ErrorCode::Inconclusive,
            "fiber is not a union of closed curves (open end or merge)");
  }

  std::vector<FiberCurve> curves;
  std::vector<char> seen(points.size(), 0);
  const double h = spec.h();
  for (std::size_t start = 0; start < points.size(); ++start) {
    if (seen[start]) continue;
    FiberCurve c;
    c.value = p;
    int cur = static_cast<int>(start);
    while (!seen[cur]) {
      seen[cur] = 1;
      Vec x(3);
      x << points[cur][0], points[cur][1], points[cur][2];
      c.vertices.push_back(x);
      cur = next[cur];
    }
    require(cur == static_cast<int>(start), ErrorCode::Inconclusive, "fiber curve does not close");
    // Project each vertex onto the level set along grad(u, v).
    for (Vec& x : c.vertices) {
      for (int it = 0; it < options.newton_steps; ++it) {
        const Mat j = chart.jacobian(x, grid.fd_step);
        const Vec g = chart(x);
        Eigen::Vector2d r(g.dot(frame.col(0)), g.dot(frame.col(1)));
        Eigen::Matrix<double, 2, 3> jj;
        jj.row(0) = (frame.col(0).transpose() * j);
        jj.row(1) = (frame.col(1).transpose() * j);
        const Eigen::Matrix2d jjt = jj * jj.transpose();
        if (std::abs(jjt.determinant()) < 1e-300) break;
        Eigen::Vector3d step = -jj.transpose() * jjt.ldlt().solve(r);
        if (step.norm() > 0.5 * h) step *= 0.5 * h / step.norm();
        x += Vec(step);
      }
      const Vec g = chart(x);
      c.max_value_error = std::max(c.max_value_error, (g / g.norm() - p).norm());
    }
    c.refinement_steps = options.newton_steps;
    c.vertices.push_back(c.vertices.front());
    for (std::size_t i = 0; i + 1 < c.vertices.size(); ++i) {
      require((c.vertices[i + 1] - c.vertices[i]).norm() <= 2.0 * h, ErrorCode::Inconclusive,
              "fiber vertex spacing exceeds two grid cells");
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

// Signed solid angle contribution of segment pair (r1 r2), (r3 r4).
double segment_pair(const Eigen::Vector3d& r1, const Eigen::Vector3d& r2, const Eigen::Vector3d& r3,
                    const Eigen::Vector3d& r4) {
  const Eigen::Vector3d r13 = r3 - r1, r14 = r4 - r1, r23 = r3 - r2, r24 = r4 - r2;
  const Eigen::Vector3d r12 = r2 - r1, r34 = r4 - r3;
  Eigen::Vector3d n[4] = {r13.cross(r14), r14.cross(r24), r24.cross(r23), r23.cross(r13)};
  for (auto& v : n) {
    const double len = v.norm();
    if (len == 0.0) return 0.0;
    v /= len;
  }
  double omega = 0.0;
  for (int i = 0; i < 4; ++i) omega += std::asin(std::clamp(n[i].dot(n[(i + 1) % 4]), -1.0, 1.0));
  const double s = r34.cross(r12).dot(r13);
  if (s == 0.0) return 0.0;
  return s > 0.0 ? omega : -omega;
}

double min_distance(const std::vector<FiberCurve>& a, const std::vector<FiberCurve>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& ca : a) {
    for (const auto& cb : b) {
      for (const Vec& x : ca.vertices) {
        for (const Vec& y : cb.vertices) best = std::min(best, (x - y).norm());
      }
    }
  }
  return best;
}

std::size_t vertex_count(const std::vector<FiberCurve>& c) {
  std::size_t n = 0;
  for (const auto& x : c) n += x.vertices.size() - 1;
  return n;
}

}  // namespace

double gauss_linking_number(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  require(a.size() >= 4 && b.size() >= 4, ErrorCode::InvalidArgument, "linking needs closed polylines");
  require((a.front() - a.back()).norm() == 0.0 && (b.front() - b.back()).norm() == 0.0,
          ErrorCode::InvalidArgument, "polylines must be closed (first vertex repeated at the end)");
  auto to3 = [](const Vec& v) { return Eigen::Vector3d(v[0], v[1], v[2]); };
  const double sum = chunked_sum(a.size() - 1, 16, [&](std::size_t i) {
    double acc = 0.0;
    const Eigen::Vector3d r1 = to3(a[i]), r2 = to3(a[i + 1]);
    for (std::size_t j = 0; j + 1 < b.size(); ++j) acc += segment_pair(r1, r2, to3(b[j]), to3(b[j + 1]));
    return acc;
  });
  return sum / (4.0 * kPi);
}

double gauss_linking_number(const std::vector<FiberCurve>& a, const std::vector<FiberCurve>& b) {
  double total = 0.0;
  for (const auto& ca : a) {
    for (const auto& cb : b) total += gauss_linking_number(ca.vertices, cb.vertices);
  }
  return total;
}

std::vector<FiberCurve> extract_fiber(const SphereMap& f, const UnitVector& p, const HopfGrid& grid,
                                      const LinkingOptions& options) {
  require(p.sphere_dim() == 2, ErrorCode::DimensionMismatch, "fiber value must lie on S^2");
  const detail::Chart chart(f, grid);
  return trace(chart, chart.sample(), p.coords(), grid, options);
}

namespace {

InvariantResult linking_from_samples(const detail::Chart& chart, const std::vector<double>& samples,
                                     const UnitVector& p, const UnitVector& q, const HopfGrid& grid,
                                     const LinkingOptions& options) {
  InvariantResult r;
  r.method = "linking";
  r.params = grid.to_json();
  std::vector<double> pj(p.coords().data(), p.coords().data() + 3);
  std::vector<double> qj(q.coords().data(), q.coords().data() + 3);
  r.diagnostics = {{"p", pj}, {"q", qj}, {"capped", chart.capped}, {"chart_rotated", chart.rotated}};
  const Vec far = chart.far_value / chart.far_value.norm();
  require((p.coords() - q.coords()).norm() > 1e-6, ErrorCode::InvalidArgument, "p and q must differ");
  require((p.coords() - far).norm() > 1e-3 && (q.coords() - far).norm() > 1e-3, ErrorCode::InvalidArgument,
          "p and q must differ from the value at the chart pole");
  try {
    const auto fp = trace(chart, samples, p.coords(), grid, options);
    const auto fq = trace(chart, samples, q.coords(), grid, options);
    r.diagnostics["components_p"] = fp.size();
    r.diagnostics["components_q"] = fq.size();
    r.diagnostics["vertices_p"] = vertex_count(fp);
    r.diagnostics["vertices_q"] = vertex_count(fq);
    double err = 0.0;
    for (const auto& c : fp) err = std::max(err, c.max_value_error);
    for (const auto& c : fq) err = std::max(err, c.max_value_error);
    r.diagnostics["max_value_error"] = err;
    const double sep = min_distance(fp, fq);
    r.diagnostics["min_separation_cells"] = std::isfinite(sep) ? sep / chart.spec.h() : -1.0;
    if (std::isfinite(sep) && sep < options.min_separation_cells * chart.spec.h()) {
      r.raw = detail::kChartOrientation * gauss_linking_number(fp, fq);
      r.rounded = std::lround(r.raw);
      r.residual = std::abs(r.raw - r.rounded);
      r.conclusive = false;
      r.diagnostics["reason"] = "fibers closer than the minimum separation";
      return r;
    }
    r.raw = detail::kChartOrientation * gauss_linking_number(fp, fq);
    r.finalize();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Inconclusive) throw;
    r.raw = std::numeric_limits<double>::quiet_NaN();
    r.finalize();
    r.diagnostics["reason"] = e.what();
  }
  return r;
}

}  // namespace

InvariantResult hopf_invariant_linking(const SphereMap& f, const UnitVector& p, const UnitVector& q,
                                       const HopfGrid& grid, const LinkingOptions& options) {
  require(p.sphere_dim() == 2 && q.sphere_dim() == 2, ErrorCode::DimensionMismatch,
          "fiber values must lie on S^2");
  const detail::Chart chart(f, grid);
  return linking_from_samples(chart, chart.sample(), p, q, grid, options);
}

InvariantResult hopf_invariant_linking_auto(const SphereMap& f, const HopfGrid& grid, std::uint64_t seed,
                                            const LinkingOptions& options, int attempts) {
  const detail::Chart chart(f, grid);
  const auto samples = chart.sample();
  const Vec far = chart.far_value / chart.far_value.norm();
  Rng rng(seed, 0x1ea);
  auto draw = [&]() {
    for (;;) {
      Vec v(3);
      for (int i = 0; i < 3; ++i) v[i] = rng.normal();
      v /= v.norm();
      if ((v - far).norm() > 0.3) return v;
    }
  };
  InvariantResult last;
  for (int a = 0; a < attempts; ++a) {
    const Vec p = draw();
    Vec q = draw();
    while ((q - p).norm() < 0.3) q = draw();
    InvariantResult r = linking_from_samples(chart, samples, UnitVector(p), UnitVector(q), grid, options);
    r.diagnostics["attempts"] = a + 1;
    if (r.conclusive) return r;
    last = r;
  }
  return last;
}

}  // namespace hopfdeg
