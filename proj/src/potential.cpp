#include "potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"

namespace steplike {

using nlohmann::json;

// ---------------------------------------------------------------- piecewise

PiecewiseConstantPotential::PiecewiseConstantPotential(
    StepLevels levels, std::vector<double> breakpoints,
    std::vector<double> values)
    : levels_(levels),
      breakpoints_(std::move(breakpoints)),
      values_(std::move(values)) {
  if (breakpoints_.empty())
    throw DomainError("breakpoints: at least one breakpoint is required");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i - 1] < breakpoints_[i]))
      throw DomainError("breakpoints[" + std::to_string(i) +
                        "]: must be strictly increasing");
  if (values_.size() + 1 != breakpoints_.size())
    throw DomainError("values: expected " +
                      std::to_string(breakpoints_.size() - 1) +
                      " interior values, got " + std::to_string(values_.size()));
}

double PiecewiseConstantPotential::value_at(double x) const {
  if (x < breakpoints_.front()) return levels_.v_minus;
  if (x >= breakpoints_.back()) return levels_.v_plus;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return values_[std::size_t(it - breakpoints_.begin()) - 1];
}

SupportHull PiecewiseConstantPotential::support_hull() const {
  // value on the region left of breakpoint i is region[i]
  std::vector<double> region;
  region.push_back(levels_.v_minus);
  for (double v : values_) region.push_back(v);
  region.push_back(levels_.v_plus);

  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (region[i] != region[i + 1]) {
      if (!found) lo = breakpoints_[i];
      hi = breakpoints_[i];
      found = true;
    }
  }
  // tails differ, so a genuine jump always exists
  if (!found)
    throw DomainError("support_hull: potential has no jump despite v_plus != v_minus");
  return SupportHull{lo, hi};
}

PiecewiseConstantPotential PiecewiseConstantPotential::translated(
    double c) const {
  std::vector<double> bp = breakpoints_;
  for (double& x : bp) x += c;
  return PiecewiseConstantPotential(levels_, std::move(bp), values_);
}

// ------------------------------------------------------------ perturbations

double BumpPerturbation::operator()(double x) const {
  const double u = (x - center) / half_width;
  if (std::abs(u) >= 1.0) return 0.0;
  const double c = std::cos(0.5 * kPi * u);
  return amplitude * c * c;
}

double BumpPerturbation::max_abs_derivative() const {
  // d/dx [a cos^2(pi u / 2)] = -(a pi / 2 w) sin(pi u), max at u = +-1/2
  return std::abs(amplitude) * kPi / (2.0 * half_width);
}

double TablePerturbation::operator()(double x) const {
  if (x <= xs.front() || x >= xs.back()) return 0.0;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t i = std::size_t(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ps[i - 1] + t * (ps[i] - ps[i - 1]);
}

double TablePerturbation::max_abs_derivative() const {
  double m = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i)
    m = std::max(m, std::abs((ps[i] - ps[i - 1]) / (xs[i] - xs[i - 1])));
  return m;
}

// ----------------------------------------------------- smooth perturbation V

SmoothPerturbationPotential::SmoothPerturbationPotential(StepLevels levels,
                                                         double beta,
                                                         Perturbation p)
    : levels_(levels), beta_(beta), p_(std::move(p)) {
  if (const auto* t = std::get_if<TablePerturbation>(&p_)) {
    if (t->xs.size() < 2)
      throw DomainError("perturbation.xs: need at least two samples");
    for (std::size_t i = 1; i < t->xs.size(); ++i)
      if (!(t->xs[i - 1] < t->xs[i]))
        throw DomainError("perturbation.xs[" + std::to_string(i) +
                          "]: must be strictly increasing");
    if (t->ps.size() != t->xs.size())
      throw DomainError("perturbation.ps: length must match xs");
    if (t->ps.front() != 0.0 || t->ps.back() != 0.0)
      throw DomainError(
          "perturbation.ps: must vanish at both ends (compact support)");
  } else {
    const auto& b = std::get<BumpPerturbation>(p_);
    if (!(b.half_width > 0.0))
      throw DomainError("perturbation.half_width: must be positive");
  }
}

double SmoothPerturbationPotential::p_at(double x) const {
  return std::visit([x](const auto& p) { return p(x); }, p_);
}

double SmoothPerturbationPotential::value_at(double x) const {
  return (x < beta_ ? levels_.v_minus : levels_.v_plus) + p_at(x);
}

double SmoothPerturbationPotential::max_abs_p_derivative() const {
  return std::visit([](const auto& p) { return p.max_abs_derivative(); }, p_);
}

SupportHull SmoothPerturbationPotential::p_hull() const {
  const bool trivial = std::visit(
      [](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>,
                                     BumpPerturbation>)
          return p.amplitude == 0.0;
        else
          return std::all_of(p.ps.begin(), p.ps.end(),
                             [](double v) { return v == 0.0; });
      },
      p_);
  if (trivial) return SupportHull{beta_, beta_};
  return std::visit(
      [](const auto& p) {
        return SupportHull{p.lo(), p.hi()};
      },
      p_);
}

double SmoothPerturbationPotential::b1() const {
  const SupportHull h = p_hull();
  return std::max(std::abs(h.a), std::abs(h.b));
}

SupportHull SmoothPerturbationPotential::support_hull() const {
  const SupportHull h = p_hull();
  return SupportHull{std::min(h.a, beta_), std::max(h.b, beta_)};
}

double SmoothPerturbationPotential::left_edge() const {
  return support_hull().a;
}

double SmoothPerturbationPotential::right_edge() const {
  return support_hull().b;
}

std::vector<double> SmoothPerturbationPotential::knots() const {
  std::vector<double> k;
  k.push_back(beta_);
  const SupportHull h = p_hull();
  k.push_back(h.a);
  k.push_back(h.b);
  if (const auto* t = std::get_if<TablePerturbation>(&p_))
    k.insert(k.end(), t->xs.begin(), t->xs.end());
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

SmoothPerturbationPotential SmoothPerturbationPotential::translated(
    double c) const {
  Perturbation p = p_;
  std::visit(
      [c](auto& q) {
        if constexpr (std::is_same_v<std::decay_t<decltype(q)>,
                                     BumpPerturbation>) {
          q.center += c;
        } else {
          for (double& x : q.xs) x += c;
        }
      },
      p);
  return SmoothPerturbationPotential(levels_, beta_ + c, std::move(p));
}

// ------------------------------------------------------------------ variant

const StepLevels& Potential::levels() const {
  return std::visit([](const auto& v) -> const StepLevels& { return v.levels(); },
                    model_);
}

double Potential::value_at(double x) const {
  return std::visit([x](const auto& v) { return v.value_at(x); }, model_);
}

SupportHull Potential::support_hull() const {
  return std::visit([](const auto& v) { return v.support_hull(); }, model_);
}

Potential Potential::translated(double c) const {
  return std::visit([c](const auto& v) { return Potential(v.translated(c)); },
                    model_);
}

// --------------------------------------------------------------- discretize

PiecewiseConstantPotential discretize(const SmoothPerturbationPotential& v,
                                      int n_layers) {
  if (n_layers < 1) throw DomainError("discretize: n_layers must be >= 1");
  const SupportHull h = v.p_hull();
  std::vector<double> edges;
  if (h.length() > 0.0) {
    edges.reserve(std::size_t(n_layers) + 2);
    for (int i = 0; i <= n_layers; ++i)
      edges.push_back(h.a + (h.b - h.a) * double(i) / double(n_layers));
  }
  edges.push_back(v.beta());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<double> values;
  values.reserve(edges.size() - 1);
  for (std::size_t i = 1; i < edges.size(); ++i)
    values.push_back(v.value_at(0.5 * (edges[i - 1] + edges[i])));
  return PiecewiseConstantPotential(v.levels(), std::move(edges),
                                    std::move(values));
}

double discretize_sup_error_bound(const SmoothPerturbationPotential& v,
                                  int n_layers) {
  if (n_layers < 1) throw DomainError("discretize: n_layers must be >= 1");
  const SupportHull h = v.p_hull();
  const double width = h.length() / double(n_layers);
  return v.max_abs_p_derivative() * width / 2.0;
}

// --------------------------------------------------------------------- JSON

namespace {

double require_number(const json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number())
    throw DomainError("potential file: missing or non-numeric field '" + field +
                      "'");
  return j[field].get<double>();
}

std::vector<double> require_array(const json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_array())
    throw DomainError("potential file: missing or non-array field '" + field +
                      "'");
  std::vector<double> out;
  for (const auto& e : j[field]) {
    if (!e.is_number())
      throw DomainError("potential file: non-numeric entry in '" + field + "'");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

Potential Potential::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("potential file: invalid JSON: ") + e.what());
  }
  const double vm = require_number(j, "v_minus");
  const double vp = require_number(j, "v_plus");
  if (!(vp < vm))
    throw DomainError("potential file: requires v_plus < v_minus");
  const StepLevels lv(vp, vm);

  if (j.contains("perturbation") || j.contains("beta")) {
    const double beta = require_number(j, "beta");
    if (!j.contains("perturbation") || !j["perturbation"].is_object())
      throw DomainError("potential file: missing object field 'perturbation'");
    const json& p = j["perturbation"];
    if (!p.contains("kind") || !p["kind"].is_string())
      throw DomainError("potential file: missing field 'perturbation.kind'");
    const std::string kind = p["kind"].get<std::string>();
    if (kind == "bump") {
      BumpPerturbation b;
      b.amplitude = require_number(p, "amplitude");
      b.half_width = require_number(p, "half_width");
      b.center = p.contains("center") ? require_number(p, "center") : 0.0;
      if (!(b.half_width > 0.0))
        throw DomainError("potential file: 'perturbation.half_width' must be positive");
      return Potential(SmoothPerturbationPotential(lv, beta, b));
    }
    if (kind == "table") {
      TablePerturbation t;
      t.xs = require_array(p, "xs");
      t.ps = require_array(p, "ps");
      return Potential(SmoothPerturbationPotential(lv, beta, t));
    }
    throw DomainError("potential file: unknown 'perturbation.kind' = '" + kind +
                      "'");
  }

  std::vector<double> bp = require_array(j, "breakpoints");
  std::vector<double> vals = j.contains("values")
                                 ? require_array(j, "values")
                                 : std::vector<double>{};
  return Potential(PiecewiseConstantPotential(lv, std::move(bp), std::move(vals)));
}

Potential Potential::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw DomainError("potential file: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string Potential::to_json_text() const {
  json j;
  j["v_plus"] = levels().v_plus;
  j["v_minus"] = levels().v_minus;
  if (piecewise()) {
    const auto& v = as_piecewise();
    j["breakpoints"] = v.breakpoints();
    j["values"] = v.values();
  } else {
    const auto& v = as_smooth();
    j["beta"] = v.beta();
    json p;
    if (const auto* b = std::get_if<BumpPerturbation>(&v.perturbation())) {
      p["kind"] = "bump";
      p["amplitude"] = b->amplitude;
      p["center"] = b->center;
      p["half_width"] = b->half_width;
    } else {
      const auto& t = std::get<TablePerturbation>(v.perturbation());
      p["kind"] = "table";
      p["xs"] = t.xs;
      p["ps"] = t.ps;
    }
    j["perturbation"] = p;
  }
  return j.dump(2);
}

}  // namespace steplike
