#include "acs/panel2d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acs {

namespace {

constexpr int kN = 15;
constexpr double kXgk[kN] = {
    -0.991455371120812639206854697526329, -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926, -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730, -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245, 0.0,
    0.207784955007898467600689403773245,  0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,  0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,  0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
constexpr double kWgk[kN] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
// Embedded 7-point Gauss weights live on the odd Kronrod indices.
constexpr double kWg[kN] = {
    0.0, 0.129484966168869693270611432679082, 0.0,
    0.279705391489276667901467771423780, 0.0,
    0.381830050505118944950369775488975, 0.0,
    0.417959183673469387755102040816327, 0.0,
    0.381830050505118944950369775488975, 0.0,
    0.279705391489276667901467771423780, 0.0,
    0.129484966168869693270611432679082, 0.0};

struct PanelData {
  Rect r;
  std::vector<std::complex<double>> value;
  double error;
};

void estimate_panel(int m, const Integrand2D& f, const Rect& r, PanelData& out,
                    long& evals, std::vector<std::complex<double>>& scratch) {
  const double cx = 0.5 * (r.ax + r.bx), hx = 0.5 * (r.bx - r.ax);
  const double cy = 0.5 * (r.ay + r.by), hy = 0.5 * (r.by - r.ay);

  std::vector<std::complex<double>> kk(m), gg(m);
  for (int i = 0; i < kN; ++i) {
    std::vector<std::complex<double>> row_k(m), row_g(m);
    for (int j = 0; j < kN; ++j) {
      f(cx + hx * kXgk[i], cy + hy * kXgk[j], scratch);
      ++evals;
      for (int c = 0; c < m; ++c) {
        row_k[c] += kWgk[j] * scratch[c];
        row_g[c] += kWg[j] * scratch[c];
      }
    }
    for (int c = 0; c < m; ++c) {
      kk[c] += kWgk[i] * row_k[c];
      gg[c] += kWg[i] * row_g[c];
    }
  }
  const double scale = hx * hy;
  out.r = r;
  out.value.assign(m, {});
  out.error = 0.0;
  for (int c = 0; c < m; ++c) {
    out.value[c] = scale * kk[c];
    out.error = std::max(out.error, std::abs(scale) * std::abs(kk[c] - gg[c]));
  }
}

}  // namespace

Adaptive2DResult integrate2d(int m, const Integrand2D& f, Rect domain,
                             const Adaptive2DOptions& opt) {
  if (m < 1) throw std::domain_error("integrate2d: need at least one component");

  Adaptive2DResult res;
  res.value.assign(m, {});
  std::vector<std::complex<double>> scratch(m);

  std::vector<PanelData> panels;
  const int s = std::max(1, opt.min_subdivisions);
  const double wx = (domain.bx - domain.ax) / s;
  const double wy = (domain.by - domain.ay) / s;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      PanelData p;
      Rect r{domain.ax + i * wx, domain.ax + (i + 1) * wx,
             domain.ay + j * wy, domain.ay + (j + 1) * wy};
      estimate_panel(m, f, r, p, res.evaluations, scratch);
      panels.push_back(std::move(p));
    }

  double total_err = 0.0;
  for (const auto& p : panels) {
    for (int c = 0; c < m; ++c) res.value[c] += p.value[c];
    total_err += p.error;
  }
  auto value_scale = [&]() {
    double v = 0.0;
    for (int c = 0; c < m; ++c) v = std::max(v, std::abs(res.value[c]));
    return v;
  };

  const double span_x = domain.bx - domain.ax;
  const double span_y = domain.by - domain.ay;

  while (total_err > std::max(opt.abs_tol, opt.rel_tol * value_scale()) &&
         static_cast<int>(panels.size()) < opt.max_panels) {
    size_t worst = 0;
    for (size_t i = 1; i < panels.size(); ++i)
      if (panels[i].error > panels[worst].error) worst = i;

    const Rect r = panels[worst].r;
    const bool split_x =
        (r.bx - r.ax) / span_x >= (r.by - r.ay) / span_y;
    Rect r1 = r, r2 = r;
    if (split_x) {
      const double mid = 0.5 * (r.ax + r.bx);
      r1.bx = mid;
      r2.ax = mid;
    } else {
      const double mid = 0.5 * (r.ay + r.by);
      r1.by = mid;
      r2.ay = mid;
    }
    PanelData p1, p2;
    estimate_panel(m, f, r1, p1, res.evaluations, scratch);
    estimate_panel(m, f, r2, p2, res.evaluations, scratch);
    total_err += p1.error + p2.error - panels[worst].error;
    for (int c = 0; c < m; ++c)
      res.value[c] += p1.value[c] + p2.value[c] - panels[worst].value[c];
    panels[worst] = std::move(p1);
    panels.push_back(std::move(p2));
  }

  res.error = total_err;
  res.panels = static_cast<int>(panels.size());
  res.converged =
      total_err <= std::max(opt.abs_tol, opt.rel_tol * value_scale());
  return res;
}

}  // namespace acs
