#include "qew/regimes.hpp"

#include <array>
#include <cmath>
#include <map>

#include "qew/constants.hpp"
#include "qew/errors.hpp"
#include "qew/parallel.hpp"
#include "qew/perturbation.hpp"

namespace qew {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Acceleration:
      return "Acceleration";
    case Regime::PINEM:
      return "PINEM";
    case Regime::APINEM:
      return "APINEM";
  }
  return "unknown";
}

Regime label_for(double gamma0, double gamma) {
  if (gamma < kSqrt2) return Regime::Acceleration;
  if (gamma0 >= kSqrt2) return Regime::PINEM;
  return Regime::APINEM;
}

RegimeReport classify(const BeamParams& beam, double lambda) {
  const auto kin = kinematics_from_beta(beam.beta);
  const auto ps = photon_scale(lambda, kin);
  RegimeReport r;
  r.sigma_z_entrance = analytic_sigma_z(beam.sigma_z0, beam.drift_time(kin), kin);
  r.Gamma0 = gamma_factor(beam.sigma_z0, ps.beta_lambda);
  r.Gamma = gamma_factor(r.sigma_z_entrance, ps.beta_lambda);
  r.damping = std::exp(-0.5 * r.Gamma * r.Gamma);
  r.label = label_for(r.Gamma0, r.Gamma);
  if (r.label == Regime::PINEM) {
    r.predicted_spectral_period = ps.recoil;
  } else if (r.label == Regime::APINEM) {
    r.predicted_spectral_period = apinem_fringe_spacing(beam, kin, ps.beta_lambda).delta_p;
  }
  return r;
}

namespace {

std::vector<double> axis(double lo, double hi, std::size_t n, bool log_spaced, const char* name) {
  if (n == 1) {
    if (lo != hi) {
      throw DomainError(std::string(name) + ": a single-point axis needs a zero-width range");
    }
    return {lo};
  }
  if (n < 16) throw DomainError(std::string(name) + ": resolution must be >= 16");
  if (!(hi > lo)) throw DomainError(std::string(name) + ": range must have positive width");
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    a[i] = log_spaced ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                      : lo + t * (hi - lo);
  }
  return a;
}

struct Point {
  double x;  // log sigma
  double y;  // L_D
};

// Level-zero contour of f on a rectilinear grid via marching squares.
std::vector<Polyline> contour(const std::vector<double>& f, const std::vector<double>& xs,
                              const std::vector<double>& ys) {
  const std::size_t nx = xs.size(), ny = ys.size();
  auto val = [&](std::size_t iy, std::size_t ix) { return f[iy * nx + ix]; };
  auto inside = [](double v) { return v < 0.0; };
  std::vector<Polyline> lines;

  auto crossing = [&](double x0, double y0, double f0, double x1, double y1, double f1) {
    const double t = f0 / (f0 - f1);
    return Point{x0 + t * (x1 - x0), y0 + t * (y1 - y0)};
  };
  auto to_polyline = [](const std::vector<Point>& pts) {
    Polyline pl;
    for (const auto& p : pts) {
      pl.sigma_z0.push_back(std::exp(p.x));
      pl.L_D.push_back(p.y);
    }
    return pl;
  };

  // Line scans: isolated crossing points.
  if (nx == 1 || ny == 1) {
    const std::size_t n = std::max(nx, ny);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double f0 = nx == 1 ? val(i, 0) : val(0, i);
      const double f1 = nx == 1 ? val(i + 1, 0) : val(0, i + 1);
      if (inside(f0) == inside(f1)) continue;
      const Point p = nx == 1 ? crossing(xs[0], ys[i], f0, xs[0], ys[i + 1], f1)
                              : crossing(xs[i], ys[0], f0, xs[i + 1], ys[0], f1);
      lines.push_back(to_polyline({p}));
    }
    return lines;
  }

  // Edge ids: horizontal (iy, ix)-(iy, ix+1) -> 2*(iy*nx+ix); vertical (iy, ix)-(iy+1, ix) -> +1.
  auto hid = [&](std::size_t iy, std::size_t ix) { return 2 * (iy * nx + ix); };
  auto vid = [&](std::size_t iy, std::size_t ix) { return 2 * (iy * nx + ix) + 1; };
  std::map<std::size_t, Point> points;
  std::map<std::size_t, std::vector<std::size_t>> adj;
  auto edge_point = [&](std::size_t id) -> const Point& {
    auto it = points.find(id);
    if (it != points.end()) return it->second;
    const std::size_t cell = id / 2;
    const std::size_t iy = cell / nx, ix = cell % nx;
    Point p = (id % 2 == 0)
                  ? crossing(std::log(xs[ix]), ys[iy], val(iy, ix), std::log(xs[ix + 1]), ys[iy],
                             val(iy, ix + 1))
                  : crossing(std::log(xs[ix]), ys[iy], val(iy, ix), std::log(xs[ix]), ys[iy + 1],
                             val(iy + 1, ix));
    return points.emplace(id, p).first->second;
  };
  auto link = [&](std::size_t a, std::size_t b) {
    edge_point(a);
    edge_point(b);
    adj[a].push_back(b);
    adj[b].push_back(a);
  };

  for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
    for (std::size_t ix = 0; ix + 1 < nx; ++ix) {
      // corners: 0 (iy,ix) 1 (iy,ix+1) 2 (iy+1,ix+1) 3 (iy+1,ix)
      const std::array<double, 4> c{val(iy, ix), val(iy, ix + 1), val(iy + 1, ix + 1),
                                    val(iy + 1, ix)};
      // edges: 0 bottom, 1 right, 2 top, 3 left; edge e joins corners e and e+1
      const std::array<std::size_t, 4> e{hid(iy, ix), vid(iy, ix + 1), hid(iy + 1, ix),
                                         vid(iy, ix)};
      std::array<bool, 4> cut{};
      int ncut = 0;
      for (int k = 0; k < 4; ++k) {
        cut[k] = inside(c[k]) != inside(c[(k + 1) % 4]);
        ncut += cut[k];
      }
      if (ncut == 2) {
        int a = -1, b = -1;
        for (int k = 0; k < 4; ++k) {
          if (cut[k]) (a < 0 ? a : b) = k;
        }
        link(e[a], e[b]);
      } else if (ncut == 4) {
        const bool centre = inside(0.25 * (c[0] + c[1] + c[2] + c[3]));
        for (int k = 0; k < 4; ++k) {
          // corner k is adjacent to edges k-1 and k
          if (inside(c[k]) != centre) link(e[(k + 3) % 4], e[k]);
        }
      }
    }
  }

  // Chain segments: open ends first, then closed loops.
  std::map<std::size_t, bool> used_edge;
  auto walk = [&](std::size_t start) {
    std::vector<Point> pts{points.at(start)};
    std::size_t prev = start, cur = start;
    used_edge[start] = true;
    while (true) {
      std::size_t next = prev;
      bool found = false;
      for (auto nb : adj[cur]) {
        if (!used_edge[nb]) {
          next = nb;
          found = true;
          break;
        }
      }
      if (!found) {
        // close a loop back to its start
        for (auto nb : adj[cur]) {
          if (nb == start && cur != start && pts.size() > 2) pts.push_back(points.at(start));
        }
        break;
      }
      used_edge[next] = true;
      pts.push_back(points.at(next));
      prev = cur;
      cur = next;
    }
    lines.push_back(to_polyline(pts));
  };
  for (const auto& [id, nbs] : adj) {
    if (nbs.size() == 1 && !used_edge[id]) walk(id);
  }
  for (const auto& [id, nbs] : adj) {
    if (!used_edge[id]) walk(id);
  }
  return lines;
}

}  // namespace

PhaseDiagram phase_diagram(const DiagramRange& range, double beta, double lambda) {
  const auto kin = kinematics_from_beta(beta);
  photon_scale(lambda, kin);  // rejects lambda <= 0 before the sweep
  if (!(range.sigma_min > 0.0)) throw DomainError("sigma range must be positive");
  PhaseDiagram d;
  d.beta = beta;
  d.lambda = lambda;
  d.sigma_z0_axis = axis(range.sigma_min, range.sigma_max, range.n_sigma, true, "sigma_z0 axis");
  d.L_D_axis = axis(range.L_D_min, range.L_D_max, range.n_LD, false, "L_D axis");
  const std::size_t ns = d.n_sigma(), nl = d.n_LD();
  d.damping.resize(ns * nl);
  d.gamma.resize(ns * nl);
  d.labels.resize(ns * nl);
  std::vector<double> f_gamma(ns * nl), f_gamma0(ns * nl);

  parallel_for(nl, [&](std::size_t il) {
    for (std::size_t is = 0; is < ns; ++is) {
      BeamParams b;
      b.beta = beta;
      b.sigma_z0 = d.sigma_z0_axis[is];
      b.L_D = d.L_D_axis[il];
      const auto r = classify(b, lambda);
      const std::size_t i = d.index(il, is);
      d.damping[i] = r.damping;
      d.gamma[i] = r.Gamma;
      d.labels[i] = r.label;
      f_gamma[i] = r.Gamma - kSqrt2;
      f_gamma0[i] = r.Gamma0 - kSqrt2;
    }
  });
  d.gamma_contour = contour(f_gamma, d.sigma_z0_axis, d.L_D_axis);
  d.gamma0_contour = contour(f_gamma0, d.sigma_z0_axis, d.L_D_axis);
  return d;
}

}  // namespace qew
