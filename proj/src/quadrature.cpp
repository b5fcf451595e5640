#include "renyi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "renyi/accum.hpp"
#include "renyi/errors.hpp"

namespace renyi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gauss-Kronrod 7-15 abscissae (positive half) and weights.
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWeightK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWeightG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
  double lo, hi;
  double val;   // scaled integral estimate (Kronrod)
  double err;   // scaled |Kronrod - Gauss|
};

struct PanelEval {
  Panel panel;
  double peak_log;  // max log|f| seen at the nodes
};

PanelEval eval_panel(const LogIntegrand& f, double lo, double hi, double scale) {
  double c = 0.5 * (lo + hi);
  double h = 0.5 * (hi - lo);
  double peak = -kInf;
  double k_sum = 0.0, g_sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    int reps = (i == 7) ? 1 : 2;
    for (int r = 0; r < reps; ++r) {
      double x = c + (r == 0 ? h : -h) * kNodes[i];
      LogVal v = f(x);
      if (std::isnan(v.log_abs)) throw NumericalFailure("quadrature: integrand returned nan");
      peak = std::max(peak, v.log_abs);
      double fv = (v.sign == 0.0) ? 0.0 : v.sign * std::exp(v.log_abs - scale);
      k_sum += kWeightK[i] * fv;
      if (i % 2 == 1) g_sum += kWeightG[i / 2] * fv;
    }
  }
  Panel p{lo, hi, h * k_sum, std::fabs(h * (k_sum - g_sum))};
  return {p, peak};
}

struct ByError {
  bool operator()(const Panel& a, const Panel& b) const { return a.err < b.err; }
};

}  // namespace

QuadResult integrate_log(const LogIntegrand& f, double a, double b,
                         double abs_tol, double rel_tol, std::size_t max_panels) {
  if (!(a < b)) {
    if (a == b) return {-kInf, 0.0, 0.0, 0};
    throw NumericalFailure("quadrature: inverted interval");
  }
  // Pre-scan to pick the working scale.
  double scan_max = -kInf;
  for (int i = 0; i < 64; ++i) {
    double x = a + (b - a) * (i + 0.5) / 64.0;
    scan_max = std::max(scan_max, f(x).log_abs);
  }

  // A boundary layer much thinner than the node spacing is invisible to the
  // root panel: every sampled value sits hundreds of e-folds below the edge
  // peak, so the error estimate tracks only the visible mass and the result
  // converges to garbage. Probe just inside each edge; when an edge dominates
  // the interior scan, seed a geometric ladder of panels toward it so the
  // layer is sampled at every scale.
  double w = b - a;
  double la = f(a + 1e-13 * w).log_abs;
  double lb = f(b - 1e-13 * w).log_abs;
  bool ladder_a = la > scan_max + 20.0;
  bool ladder_b = lb > scan_max + 20.0;
  // Fold the probes into the scale only when they seed a ladder: an edge
  // probe riding an integrable singularity would otherwise inflate the scale
  // and loosen the absolute tolerance (which lives in scaled units).
  double scale = scan_max;
  if (ladder_a) scale = std::max(scale, la);
  if (ladder_b) scale = std::max(scale, lb);
  if (!std::isfinite(scale)) scale = 0.0;

  std::vector<double> cuts;
  cuts.push_back(a);
  if (ladder_a)
    for (int k = 21; k >= 1; --k) cuts.push_back(a + w * std::pow(4.0, -k));
  if (ladder_b)
    for (int k = 1; k <= 21; ++k) cuts.push_back(b - w * std::pow(4.0, -k));
  cuts.push_back(b);

  for (int restart = 0; restart < 64; ++restart) {
    std::vector<Panel> heap;
    std::vector<Panel> frozen;
    double observed_peak = -kInf;
    bool need_restart = false;

    double total = 0.0;
    double terr = 0.0;

    auto push = [&](double lo, double hi) {
      PanelEval pe = eval_panel(f, lo, hi, scale);
      observed_peak = std::max(observed_peak, pe.peak_log);
      if (observed_peak > scale + 200.0) {
        need_restart = true;
        return;
      }
      total += pe.panel.val;
      terr += pe.panel.err;
      heap.push_back(pe.panel);
      std::push_heap(heap.begin(), heap.end(), ByError{});
    };

    for (std::size_t i = 0; i + 1 < cuts.size() && !need_restart; ++i)
      if (cuts[i] < cuts[i + 1]) push(cuts[i], cuts[i + 1]);

    while (!need_restart) {
      if (terr <= std::max(abs_tol, rel_tol * std::fabs(total))) break;
      if (heap.empty()) break;
      if (heap.size() + frozen.size() >= max_panels)
        throw NumericalFailure("quadrature: panel budget exhausted");
      std::pop_heap(heap.begin(), heap.end(), ByError{});
      Panel worst = heap.back();
      heap.pop_back();
      if (worst.err == 0.0) {
        frozen.push_back(worst);
        break;
      }
      double width = worst.hi - worst.lo;
      if (width < 1e-15 * (1.0 + std::fabs(worst.lo) + std::fabs(worst.hi))) {
        frozen.push_back(worst);
        continue;
      }
      total -= worst.val;
      terr -= worst.err;
      double mid = 0.5 * (worst.lo + worst.hi);
      push(worst.lo, mid);
      push(mid, worst.hi);
    }

    if (need_restart) {
      scale = observed_peak;
      continue;
    }

    KahanSum tv, te;
    for (const Panel& p : heap) {
      tv.add(p.val);
      te.add(p.err);
    }
    for (const Panel& p : frozen) {
      tv.add(p.val);
      te.add(p.err);
    }
    double v = tv.value();
    double e = te.value();
    QuadResult out{};
    out.panels = heap.size() + frozen.size();
    out.est_abs_error = e * std::exp(std::min(scale, 700.0));
    if (v == 0.0) {
      out.log_abs = -kInf;
      out.sign = 0.0;
    } else {
      out.log_abs = scale + std::log(std::fabs(v));
      out.sign = (v > 0.0) ? 1.0 : -1.0;
    }
    return out;
  }
  throw NumericalFailure("quadrature: scale did not settle");
}

}  // namespace renyi
