#include "steplike.h"

#include <cstdlib>
#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "asymptotics.hpp"
#include "errors.hpp"
#include "inverse.hpp"
#include "potential.hpp"
#include "resonances.hpp"
#include "scattering.hpp"

using nlohmann::json;
using namespace steplike;

struct slk_potential {
  Potential pot;
};

namespace {

thread_local std::string g_last_error;

slk_status fail(slk_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

template <class Fn>
slk_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    return fail(SLK_ERR_PARSE, e.what());
  } catch (const DomainError& e) {
    return fail(SLK_ERR_INVALID_ARGUMENT, e.what());
  } catch (const BranchPointError& e) {
    return fail(SLK_ERR_BRANCH_POINT, e.what());
  } catch (const PoleError& e) {
    return fail(SLK_ERR_POLE, e.what());
  } catch (const ContourError& e) {
    return fail(SLK_ERR_CONTOUR, e.what());
  } catch (const NumericError& e) {
    return fail(SLK_ERR_NUMERIC, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SLK_ERR_NUMERIC, "out of memory");
  } catch (const std::exception& e) {
    return fail(SLK_ERR_NUMERIC, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

slk_complex to_c(Complex z) { return slk_complex{z.real(), z.imag()}; }

SurfacePoint to_point(const slk_point& p) {
  SurfacePoint out;
  out.z = Complex(p.re_z, p.im_z);
  out.sheet = SheetSignature{p.s_plus >= 0 ? +1 : -1, p.s_minus >= 0 ? +1 : -1};
  out.side = p.boundary_side > 0   ? Side::upper
             : p.boundary_side < 0 ? Side::lower
                                   : Side::none;
  return out;
}

json parse_config(const char* text) {
  if (!text) throw DomainError("config: null JSON text");
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: invalid JSON: ") + e.what());
  }
}

double get_or(const json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_number())
    throw DomainError(std::string("config: field '") + key +
                      "' must be a number");
  return j[key].get<double>();
}

std::string get_string(const json& j, const char* key,
                       const std::string& dflt) {
  if (!j.contains(key)) return dflt;
  if (!j[key].is_string())
    throw DomainError(std::string("config: field '") + key +
                      "' must be a string");
  return j[key].get<std::string>();
}

LocateResult locate_square(const Potential& pot, SheetSignature sheet,
                           double half_side, double tol, double ode_tol,
                           int threads) {
  LocateOptions lo;
  lo.tol = tol;
  lo.ode_tol = ode_tol;
  lo.threads = threads;
  return locate(pot,
                SearchRegion{sheet, Rect{-half_side, half_side, -half_side,
                                         half_side}},
                lo);
}

}  // namespace

extern "C" {

slk_status slk_potential_from_json(const char* json_text,
                                   slk_potential** out) {
  if (!json_text || !out)
    return fail(SLK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new slk_potential{Potential::from_json_text(json_text)};
    return SLK_OK;
  });
}

slk_status slk_potential_from_file(const char* path, slk_potential** out) {
  if (!path || !out) return fail(SLK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    try {
      *out = new slk_potential{Potential::from_file(path)};
    } catch (const DomainError& e) {
      if (std::string(e.what()).find("cannot open") != std::string::npos) {
        return fail(SLK_ERR_IO, e.what());
      }
      throw;
    }
    return SLK_OK;
  });
}

void slk_potential_free(slk_potential* pot) { delete pot; }

slk_status slk_potential_support_hull(const slk_potential* pot, double* a,
                                      double* b) {
  if (!pot || !a || !b) return fail(SLK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const SupportHull h = pot->pot.support_hull();
    *a = h.a;
    *b = h.b;
    return SLK_OK;
  });
}

slk_status slk_potential_levels(const slk_potential* pot, double* v_plus,
                                double* v_minus) {
  if (!pot || !v_plus || !v_minus)
    return fail(SLK_ERR_INVALID_ARGUMENT, "null argument");
  *v_plus = pot->pot.levels().v_plus;
  *v_minus = pot->pot.levels().v_minus;
  return SLK_OK;
}

slk_status slk_scattering_eval(const slk_potential* pot, slk_point at,
                               double ode_tol, slk_coefficients* out) {
  if (!pot || !out) return fail(SLK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const ScatteringCoefficients c = scattering_coefficients(
        pot->pot, to_point(at), ode_tol > 0 ? ode_tol : 1e-10);
    out->t_minus = to_c(c.T_minus());
    out->t_plus = to_c(c.T_plus());
    out->r_minus = to_c(c.R_minus());
    out->r_plus = to_c(c.R_plus());
    out->wronskian_d = to_c(c.D());
    out->r_plus_root = to_c(c.rp);
    out->r_minus_root = to_c(c.rm);
    return SLK_OK;
  });
}

slk_status slk_identities_check(const slk_potential* pot, slk_point at,
                                double ode_tol, double residuals[9]) {
  if (!pot || !residuals)
    return fail(SLK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const IdentityReport rep = check_identities(
        pot->pot, to_point(at), ode_tol > 0 ? ode_tol : 1e-10);
    for (int i = 0; i < 9; ++i)
      residuals[i] = rep.skipped[i] ? -1.0 : rep.residual[i];
    return SLK_OK;
  });
}

slk_status slk_resonances_locate(const slk_potential* pot,
                                 const char* region_json, int allow_unresolved,
                                 char** csv_out, char** json_out) {
  if (!pot || !region_json)
    return fail(SLK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const json cfg = parse_config(region_json);
    const std::string sheet = get_string(cfg, "sheet", "mm");
    if (!cfg.contains("rect") || !cfg["rect"].is_array() ||
        cfg["rect"].size() != 4)
      throw DomainError("config: field 'rect' must be [re0,re1,im0,im1]");
    Rect rect{cfg["rect"][0].get<double>(), cfg["rect"][1].get<double>(),
              cfg["rect"][2].get<double>(), cfg["rect"][3].get<double>()};
    LocateOptions lo;
    lo.tol = get_or(cfg, "tol", 1e-9);
    lo.ode_tol = get_or(cfg, "ode_tol", 1e-10);
    lo.threads = int(get_or(cfg, "threads", 1));
    const LocateResult res =
        locate(pot->pot, SearchRegion{SheetSignature::parse(sheet), rect}, lo);
    if (csv_out)
      *csv_out = dup_string(resonances_to_csv(res.resonances,
                                              pot->pot.levels()));
    if (json_out)
      *json_out = dup_string(locate_result_to_json(res, pot->pot.levels()));
    if (!res.unresolved.empty() && !allow_unresolved)
      return fail(SLK_ERR_UNRESOLVED,
                  std::to_string(res.unresolved.size()) +
                      " box(es) with nonzero count left unresolved");
    return SLK_OK;
  });
}

slk_status slk_eigenvalues(const slk_potential* pot, double tol,
                           double** values, size_t* count) {
  if (!pot || !values || !count)
    return fail(SLK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const std::vector<double> ev =
        eigenvalues(pot->pot, tol > 0 ? tol : 1e-10);
    *count = ev.size();
    *values = static_cast<double*>(std::malloc(sizeof(double) * ev.size()));
    for (std::size_t i = 0; i < ev.size(); ++i) (*values)[i] = ev[i];
    return SLK_OK;
  });
}

slk_status slk_counting_report(const slk_potential* pot,
                               const char* config_json, char** json_out) {
  if (!pot || !config_json || !json_out)
    return fail(SLK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const json cfg = parse_config(config_json);
    const std::string sel_name = get_string(cfg, "select", "mm");
    SheetSelect sel;
    if (sel_name == "pp") sel = SheetSelect::pp;
    else if (sel_name == "pm") sel = SheetSelect::pm;
    else if (sel_name == "mp") sel = SheetSelect::mp;
    else if (sel_name == "mm") sel = SheetSelect::mm;
    else if (sel_name == "mp_closure") sel = SheetSelect::mp_closure;
    else if (sel_name == "thm13_sum") sel = SheetSelect::thm13_sum;
    else throw DomainError("config: unknown 'select' = '" + sel_name + "'");

    RGrid grid;
    grid.r_min = get_or(cfg, "r_min", 2.0);
    grid.r_max = get_or(cfg, "r_max", 30.0);
    grid.ratio = get_or(cfg, "ratio", 1.15);
    const double pred = get_or(cfg, "predicted_slope", 0.0);
    const double tol = get_or(cfg, "tol", 1e-8);
    const double ode_tol = get_or(cfg, "ode_tol", 1e-10);
    const int threads = int(get_or(cfg, "threads", 1));

    std::vector<Resonance> all;
    const double half = grid.r_max * grid.r_max;
    auto gather = [&](SheetSignature sh) {
      const LocateResult r =
          locate_square(pot->pot, sh, half, tol, ode_tol, threads);
      if (!r.unresolved.empty())
        throw NumericError("counting: unresolved boxes in the search");
      all.insert(all.end(), r.resonances.begin(), r.resonances.end());
    };
    switch (sel) {
      case SheetSelect::pp: gather(SheetSignature{+1, +1}); break;
      case SheetSelect::pm: gather(SheetSignature{+1, -1}); break;
      case SheetSelect::mp: gather(SheetSignature{-1, +1}); break;
      case SheetSelect::mm: gather(SheetSignature{-1, -1}); break;
      case SheetSelect::mp_closure: gather(SheetSignature{-1, +1}); break;
      case SheetSelect::thm13_sum:
        gather(SheetSignature{-1, +1});
        gather(SheetSignature{+1, -1});
        break;
    }
    // the closure selections also count boundary zeros above V-
    std::vector<BoundaryZero> boundary;
    if (sel == SheetSelect::mp_closure || sel == SheetSelect::thm13_sum) {
      const double c = std::sqrt(pot->pot.levels().gap());
      const double k_lo = 1.02 * c + 1e-3;
      if (grid.r_max > 1.5 * k_lo)
        boundary = boundary_reflection_zeros(pot->pot, k_lo, grid.r_max,
                                             600, 1e-8, ode_tol);
    }
    const CountingReport rep =
        counting_function(all, sel, grid, pred, grid.r_max, boundary);
    *json_out = dup_string(rep.to_json());
    return SLK_OK;
  });
}

slk_status slk_indicator_report(const slk_potential* pot,
                                const char* config_json, char** json_out) {
  if (!pot || !config_json || !json_out)
    return fail(SLK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const json cfg = parse_config(config_json);
    const std::string tname = get_string(cfg, "target", "r_minus");
    IndicatorTarget t;
    if (tname == "r_minus") t = IndicatorTarget::r_minus;
    else if (tname == "r_plus") t = IndicatorTarget::r_plus;
    else if (tname == "rr_product") t = IndicatorTarget::rr_product;
    else throw DomainError("config: unknown 'target' = '" + tname + "'");
    const double phi = get_or(cfg, "phi", kPi / 2.0);
    const double r_min = get_or(cfg, "r_min", 10.0);
    const double r_max = get_or(cfg, "r_max", 1000.0);
    const int n = int(get_or(cfg, "n", 25));
    const double ode_tol = get_or(cfg, "ode_tol", 1e-10);
    std::vector<double> radii;
    for (int i = 0; i < n; ++i)
      radii.push_back(r_min * std::pow(r_max / r_min, double(i) / (n - 1)));
    const IndicatorEstimate est =
        indicator_estimate(pot->pot, t, phi, radii, ode_tol);
    *json_out = dup_string(est.to_json());
    return SLK_OK;
  });
}

slk_status slk_inverse_roundtrip_report(const slk_potential* pot,
                                        const char* config_json,
                                        char** json_out) {
  if (!pot || !config_json || !json_out)
    return fail(SLK_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const json cfg = parse_config(config_json);
    const std::string mode_name = get_string(cfg, "mode", "roundtrip");
    RecoveryMode mode;
    if (mode_name == "roundtrip") mode = RecoveryMode::roundtrip;
    else if (mode_name == "resonance_only") mode = RecoveryMode::resonance_only;
    else throw DomainError("config: unknown 'mode' = '" + mode_name + "'");
    const double K = get_or(cfg, "truncation_k", 40.0);
    const double z_lo = get_or(cfg, "z_lo", pot->pot.levels().v_minus + 1.0);
    const double z_hi = get_or(cfg, "z_hi", pot->pot.levels().v_minus + 100.0);
    const int n = int(get_or(cfg, "n", 100));
    const double tol = get_or(cfg, "tol", 1e-8);
    const double ode_tol = get_or(cfg, "ode_tol", 1e-10);
    const int threads = int(get_or(cfg, "threads", 1));

    std::vector<Resonance> all;
    if (mode == RecoveryMode::resonance_only) {
      const SheetSignature sheets[4] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
      for (const auto& sh : sheets) {
        const LocateResult r =
            locate_square(pot->pot, sh, K * K, tol, ode_tol, threads);
        all.insert(all.end(), r.resonances.begin(), r.resonances.end());
      }
    }
    std::vector<double> grid;
    for (int i = 0; i < n; ++i)
      grid.push_back(z_lo + (z_hi - z_lo) * double(i) / (n - 1));
    const RecoveryReport rep = recover_R_minus_on_boundary(
        pot->pot, all, mode, K, grid, ode_tol);
    *json_out = dup_string(rep.to_json());
    return SLK_OK;
  });
}

void slk_string_free(char* s) { std::free(s); }

const char* slk_last_error_message(void) { return g_last_error.c_str(); }

const char* slk_status_name(slk_status st) {
  switch (st) {
    case SLK_OK: return "ok";
    case SLK_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SLK_ERR_PARSE: return "parse_error";
    case SLK_ERR_BRANCH_POINT: return "branch_point";
    case SLK_ERR_POLE: return "pole";
    case SLK_ERR_CONTOUR: return "contour";
    case SLK_ERR_UNRESOLVED: return "unresolved";
    case SLK_ERR_NUMERIC: return "numeric";
    case SLK_ERR_IO: return "io";
  }
  return "unknown";
}

}  // extern "C"
