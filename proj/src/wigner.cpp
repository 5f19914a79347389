#include "qew/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qew/constants.hpp"
#include "qew/errors.hpp"
#include "qew/fft.hpp"
#include "qew/parallel.hpp"

namespace qew {

namespace k = constants;

double WignerGrid::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * dz * dp;
}

namespace {

// Band-limited interpolation onto the half-spaced grid (length 2N).
std::vector<cplx> refine(const std::vector<cplx>& psi) {
  const std::size_t n = psi.size();
  std::vector<cplx> f = psi;
  fft::forward(f);
  std::vector<cplx> g(2 * n, cplx{});
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = fft::signed_bin(i, n);
    if (s == -static_cast<std::ptrdiff_t>(n / 2)) {
      g[n / 2] += 0.5 * f[i];
      g[2 * n - n / 2] += 0.5 * f[i];
    } else {
      g[static_cast<std::size_t>((s + static_cast<std::ptrdiff_t>(2 * n)) %
                                 static_cast<std::ptrdiff_t>(2 * n))] = f[i];
    }
  }
  fft::backward(g);
  for (auto& v : g) v /= static_cast<double>(n);
  return g;
}

struct Selection {
  std::vector<std::size_t> rows;  // z indices
  std::vector<std::size_t> cols;  // ascending-p indices
};

Selection select(const GridSpec& g, const WignerOptions& opt) {
  if (opt.z_stride == 0 || opt.p_stride == 0) {
    throw ConfigurationError("wigner strides must be positive");
  }
  Selection s;
  for (std::size_t i = 0; i < g.N; ++i) {
    const double z = g.zeta(i);
    if (opt.z_min && z < *opt.z_min) continue;
    if (opt.z_max && z > *opt.z_max) continue;
    s.rows.push_back(i);
  }
  for (std::size_t c = 0; c < g.N; ++c) {
    const double p = (static_cast<double>(c) - static_cast<double>(g.N / 2)) * g.dp();
    if (opt.p_min && p < *opt.p_min) continue;
    if (opt.p_max && p > *opt.p_max) continue;
    s.cols.push_back(c);
  }
  auto thin = [](std::vector<std::size_t>& v, std::size_t stride) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); i += stride) out.push_back(v[i]);
    v = std::move(out);
  };
  thin(s.rows, opt.z_stride);
  thin(s.cols, opt.p_stride);
  return s;
}

struct ComplexResult {
  WignerGrid re;
  std::vector<double> im;
};

ComplexResult cross_wigner(const Wavefunction& a, const Wavefunction& b, const WignerOptions& opt) {
  const auto& g = a.grid;
  if (b.grid.N != g.N || b.grid.z_span != g.z_span) {
    throw ConfigurationError("wigner: states live on different grids");
  }
  const auto sel = select(g, opt);
  const std::size_t nz = sel.rows.size(), np = sel.cols.size();
  if (nz == 0 || np == 0) throw ConfigurationError("wigner: empty selection");
  if (!opt.allow_large && nz * np > kWignerCellLimit) {
    throw ConfigurationError("wigner: " + std::to_string(nz * np) +
                             " cells exceeds the 1e8 guard; downsample or allow_large");
  }
  const std::size_t n = g.N;
  const auto fa = refine(a.samples);
  const auto fb = (&a == &b) ? fa : refine(b.samples);

  ComplexResult out;
  auto& w = out.re;
  w.nz = nz;
  w.np = np;
  w.values.assign(nz * np, 0.0);
  out.im.assign(nz * np, 0.0);
  w.dz = g.dz() * static_cast<double>(opt.z_stride);
  w.dp = g.dp() * static_cast<double>(opt.p_stride);
  for (auto r : sel.rows) w.z_axis.push_back(g.zeta(r));
  for (auto c : sel.cols) {
    w.p_axis.push_back(a.p0 + (static_cast<double>(c) - static_cast<double>(n / 2)) * g.dp());
  }

  const double scale = g.dz() / (2.0 * k::pi * k::hbar);
  const std::size_t n2 = 2 * n;
  parallel_for(nz, [&](std::size_t row) {
    const std::size_t centre = 2 * sel.rows[row];
    std::vector<cplx> chi(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
      // lag m in [-N/2, N/2) stored at m mod N
      const auto m = fft::signed_bin(idx, n);
      const auto wrap = [n2](std::ptrdiff_t j) {
        const auto len = static_cast<std::ptrdiff_t>(n2);
        return static_cast<std::size_t>(((j % len) + len) % len);
      };
      const auto c = static_cast<std::ptrdiff_t>(centre);
      const std::size_t lo = wrap(c - m);
      const std::size_t hi = wrap(c + m);
      chi[idx] = std::conj(fa[lo]) * fb[hi];
    }
    fft::forward(chi);
    for (std::size_t col = 0; col < np; ++col) {
      const std::size_t kbin = (sel.cols[col] + n / 2) % n;  // ascending -> FFT order
      const cplx v = chi[kbin] * scale;
      w.values[row * np + col] = v.real();
      out.im[row * np + col] = v.imag();
    }
  });
  return out;
}

}  // namespace

WignerGrid wigner(const Wavefunction& psi, const WignerOptions& opt) {
  auto res = cross_wigner(psi, psi, opt);
  double peak = 0.0, resid = 0.0;
  for (std::size_t i = 0; i < res.im.size(); ++i) {
    peak = std::max(peak, std::abs(res.re.values[i]));
    resid = std::max(resid, std::abs(res.im[i]));
  }
  if (resid > 1e-10 * peak) {
    throw ConfigurationError("wigner: imaginary residue " + std::to_string(resid / peak) +
                             " of peak; state reaches half the window");
  }
  return std::move(res.re);
}

WignerGrid wigner_interference(const Wavefunction& a, const Wavefunction& b,
                               const WignerOptions& opt) {
  auto res = cross_wigner(a, b, opt);
  for (auto& v : res.re.values) v *= 2.0;
  return std::move(res.re);
}

std::vector<double> marginal_p(const WignerGrid& w) {
  std::vector<double> m(w.np, 0.0);
  for (std::size_t i = 0; i < w.nz; ++i) {
    for (std::size_t j = 0; j < w.np; ++j) m[j] += w.at(i, j);
  }
  for (auto& v : m) v *= w.dz;
  return m;
}

std::vector<double> marginal_z(const WignerGrid& w) {
  std::vector<double> m(w.nz, 0.0);
  for (std::size_t i = 0; i < w.nz; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < w.np; ++j) s += w.at(i, j);
    m[i] = s * w.dp;
  }
  return m;
}

WignerGrid with_norm(const WignerGrid& w, WignerNorm norm) {
  WignerGrid out = w;
  if (norm == w.norm) return out;
  const double f = (norm == WignerNorm::HbarHalf) ? 0.5 * k::hbar : 2.0 / k::hbar;
  for (auto& v : out.values) v *= f;
  out.norm = norm;
  return out;
}

}  // namespace qew
