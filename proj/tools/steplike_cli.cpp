// Command-line front end for the steplike scattering library.  Each
// subcommand builds a config (flags, optionally seeded from a JSON config
// file), validates it, calls the shared-library C API, and writes
// machine-readable output (17 significant digits throughout, so runs are
// byte-reproducible given the same config and seed).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steplike.h"

using nlohmann::json;

namespace {

int exit_code(slk_status st) {
  switch (st) {
    case SLK_OK: return 0;
    case SLK_ERR_INVALID_ARGUMENT: return 2;
    case SLK_ERR_PARSE: return 3;
    case SLK_ERR_BRANCH_POINT:
    case SLK_ERR_POLE:
    case SLK_ERR_NUMERIC: return 4;
    case SLK_ERR_CONTOUR: return 5;
    case SLK_ERR_UNRESOLVED: return 6;
    case SLK_ERR_IO: return 7;
  }
  return 1;
}

int report_error(slk_status st) {
  std::fprintf(stderr, "{\"error\": \"%s\", \"message\": \"%s\"}\n",
               slk_status_name(st), slk_last_error_message());
  return exit_code(st);
}

struct PotentialHandle {
  slk_potential* p = nullptr;
  ~PotentialHandle() { slk_potential_free(p); }
};

int load_potential(const std::string& path, PotentialHandle& h) {
  const slk_status st = slk_potential_from_file(path.c_str(), &h.p);
  if (st != SLK_OK) return report_error(st);
  return 0;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/" + name, std::ios::binary);
  out << content;
}

// Config-file support: a JSON object whose keys are the long option names
// without the leading dashes.  Values fill in flags the user did not pass
// explicitly; unknown keys and type mismatches are schema errors.
struct ConfigBinding {
  std::string key;
  std::function<bool(const json&)> apply;  // false on type mismatch
};

ConfigBinding bind_double(const char* key, double& var) {
  return {key, [&var](const json& v) {
            if (!v.is_number()) return false;
            var = v.get<double>();
            return true;
          }};
}
ConfigBinding bind_int(const char* key, int& var) {
  return {key, [&var](const json& v) {
            if (!v.is_number_integer()) return false;
            var = v.get<int>();
            return true;
          }};
}
ConfigBinding bind_u64(const char* key, unsigned long long& var) {
  return {key, [&var](const json& v) {
            if (!v.is_number_unsigned() && !v.is_number_integer()) return false;
            var = v.get<unsigned long long>();
            return true;
          }};
}
ConfigBinding bind_string(const char* key, std::string& var) {
  return {key, [&var](const json& v) {
            if (!v.is_string()) return false;
            var = v.get<std::string>();
            return true;
          }};
}
ConfigBinding bind_bool(const char* key, bool& var) {
  return {key, [&var](const json& v) {
            if (!v.is_boolean()) return false;
            var = v.get<bool>();
            return true;
          }};
}
ConfigBinding bind_dvec(const char* key, std::vector<double>& var) {
  return {key, [&var](const json& v) {
            if (!v.is_array()) return false;
            std::vector<double> out;
            for (const auto& e : v) {
              if (!e.is_number()) return false;
              out.push_back(e.get<double>());
            }
            var = std::move(out);
            return true;
          }};
}

// returns an exit code, 0 on success
int merge_config(CLI::App* cmd, const std::string& path,
                 const std::vector<ConfigBinding>& binds) {
  std::ifstream in(path);
  if (!in) {
    std::fprintf(stderr, "{\"error\": \"io\", \"message\": \"cannot open config %s\"}\n",
                 path.c_str());
    return 7;
  }
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    std::fprintf(stderr, "{\"error\": \"parse_error\", \"message\": \"config: %s\"}\n",
                 e.what());
    return 3;
  }
  if (!cfg.is_object()) {
    std::fprintf(stderr, "{\"error\": \"invalid_argument\", \"message\": "
                         "\"config: top level must be an object\"}\n");
    return 2;
  }
  for (auto& [key, value] : cfg.items()) {
    const ConfigBinding* bind = nullptr;
    for (const auto& b : binds)
      if (b.key == key) bind = &b;
    if (!bind) {
      std::fprintf(stderr, "{\"error\": \"invalid_argument\", \"message\": "
                           "\"config: unknown field '%s'\"}\n", key.c_str());
      return 2;
    }
    const CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt && opt->count() > 0) continue;  // explicit flag wins
    if (!bind->apply(value)) {
      std::fprintf(stderr, "{\"error\": \"invalid_argument\", \"message\": "
                           "\"config: field '%s' has the wrong type\"}\n", key.c_str());
      return 2;
    }
  }
  return 0;
}

slk_point make_point(double re, double im, const std::string& sheet,
                     const std::string& boundary, double v_plus) {
  slk_point p;
  p.re_z = re;
  p.im_z = im;
  p.s_plus = sheet[0] == 'p' ? +1 : -1;
  p.s_minus = sheet[1] == 'p' ? +1 : -1;
  if (boundary == "upper") p.boundary_side = +1;
  else if (boundary == "lower") p.boundary_side = -1;
  else if (boundary == "none") p.boundary_side = 0;
  else  // auto: tag cut points with the upper side
    p.boundary_side = (im == 0.0 && re >= v_plus) ? +1 : 0;
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scattering coefficients, resonances, counting laws, and "
               "inverse-side recovery for steplike 1-D Schroedinger operators"};
  app.require_subcommand(1);

  std::string potential_path, config_path, out_dir, format = "csv";
  std::string sheet = "pp", boundary = "auto";
  double tol = 1e-9, ode_tol = 1e-10;
  int threads = 1;
  unsigned long long seed = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_potential = true) {
    if (needs_potential)
      cmd->add_option("--potential", potential_path, "potential JSON file");
    cmd->add_option("--config", config_path,
                    "JSON config supplying defaults for unset flags");
    cmd->add_option("--out", out_dir, "directory for output files");
    cmd->add_option("--tol", tol, "position tolerance");
    cmd->add_option("--ode-tol", ode_tol, "ODE engine local error tolerance");
    cmd->add_option("--threads", threads, "worker cap for region searches");
    cmd->add_option("--seed", seed, "seed for randomized sampling");
  };

  // ------------------------------------------------------------- scatter
  auto* scatter = app.add_subcommand(
      "scatter", "coefficient table at chosen surface points");
  std::vector<double> zs;
  add_common(scatter);
  scatter->add_option("--sheet", sheet, "sheet signature pp|pm|mp|mm");
  scatter->add_option("--boundary", boundary,
                      "cut-side for real z on a cut: upper|lower|none|auto");
  scatter->add_option("--z", zs, "surface point projection: re im (repeat)")
      ->expected(-2);
  scatter->add_option("--format", format, "csv|json");

  // ---------------------------------------------------------- identities
  auto* identities = app.add_subcommand(
      "identities", "residuals of the nine coefficient identities at random "
                    "off-cut points on every sheet");
  int n_points = 50;
  double fail_above = -1.0;
  add_common(identities);
  identities->add_option("--points", n_points, "points per sheet");
  identities->add_option("--fail-above", fail_above,
                         "exit nonzero if the max residual exceeds this");

  // ---------------------------------------------------------- resonances
  auto* resonances = app.add_subcommand(
      "resonances", "locate zeros of the Jost Wronskian on a sheet");
  std::vector<double> rect;
  bool allow_unresolved = false;
  add_common(resonances);
  resonances->add_option("--sheet", sheet, "sheet signature pp|pm|mp|mm");
  resonances->add_option("--rect", rect, "search rectangle re0 re1 im0 im1")
      ->expected(4);
  resonances->add_flag("--allow-unresolved", allow_unresolved,
                       "exit 0 even when boxes remain unresolved");
  resonances->add_option("--format", format, "csv|json");

  // --------------------------------------------------------------- count
  auto* count = app.add_subcommand(
      "count", "counting function N(r) with slope fit on a sheet selection");
  std::string select = "mm";
  double rmax = 30.0, rmin = 2.0, ratio = 1.15, predicted = -1.0;
  add_common(count);
  count->add_option("--select", select,
                    "pp|pm|mp|mm|mp_closure|thm13_sum");
  count->add_option("--rmax", rmax, "largest r (search reaches |z| = rmax^2)");
  count->add_option("--rmin", rmin, "smallest r in the grid");
  count->add_option("--ratio", ratio, "geometric grid ratio");
  count->add_option("--predicted-slope", predicted,
                    "predicted N(r)/r slope; default 2(b-a)/pi from the hull");

  // ----------------------------------------------------------- indicator
  auto* indicator = app.add_subcommand(
      "indicator", "directional growth h(phi) of a reflection coefficient");
  std::string target = "r_minus";
  double phi = 1.5707963267948966, ir_min = 10.0, ir_max = 1000.0;
  int ir_n = 25;
  add_common(indicator);
  indicator->add_option("--target", target, "r_minus|r_plus|rr_product");
  indicator->add_option("--phi", phi, "ray angle in (0, pi)");
  indicator->add_option("--rmin", ir_min, "smallest |k| on the ray");
  indicator->add_option("--rmax", ir_max, "largest |k| on the ray");
  indicator->add_option("--n", ir_n, "samples along the ray");

  // ------------------------------------------------------- inverse-check
  auto* inverse = app.add_subcommand(
      "inverse-check", "recover R- on the boundary and compare with forward");
  std::string mode = "roundtrip";
  const double unset = std::numeric_limits<double>::quiet_NaN();
  double trunc_k = 40.0, z_lo = unset, z_hi = unset;
  int inv_n = 100;
  add_common(inverse);
  inverse->add_option("--mode", mode, "roundtrip|resonance_only");
  inverse->add_option("--truncation-K", trunc_k, "product truncation |r+| <= K");
  inverse->add_option("--z-lo", z_lo, "grid start (> v_minus)");
  inverse->add_option("--z-hi", z_hi, "grid end");
  inverse->add_option("--n", inv_n, "grid points");

  CLI11_PARSE(app, argc, argv);
  CLI::App* active = app.get_subcommands().front();
  if (!config_path.empty()) {
    std::vector<ConfigBinding> binds = {
        bind_string("potential", potential_path), bind_string("out", out_dir),
        bind_double("tol", tol),                  bind_double("ode-tol", ode_tol),
        bind_int("threads", threads),             bind_u64("seed", seed),
    };
    if (active == scatter) {
      binds.push_back(bind_string("sheet", sheet));
      binds.push_back(bind_string("boundary", boundary));
      binds.push_back(bind_dvec("z", zs));
      binds.push_back(bind_string("format", format));
    } else if (active == identities) {
      binds.push_back(bind_int("points", n_points));
      binds.push_back(bind_double("fail-above", fail_above));
    } else if (active == resonances) {
      binds.push_back(bind_string("sheet", sheet));
      binds.push_back(bind_dvec("rect", rect));
      binds.push_back(bind_bool("allow-unresolved", allow_unresolved));
      binds.push_back(bind_string("format", format));
    } else if (active == count) {
      binds.push_back(bind_string("select", select));
      binds.push_back(bind_double("rmax", rmax));
      binds.push_back(bind_double("rmin", rmin));
      binds.push_back(bind_double("ratio", ratio));
      binds.push_back(bind_double("predicted-slope", predicted));
    } else if (active == indicator) {
      binds.push_back(bind_string("target", target));
      binds.push_back(bind_double("phi", phi));
      binds.push_back(bind_double("rmin", ir_min));
      binds.push_back(bind_double("rmax", ir_max));
      binds.push_back(bind_int("n", ir_n));
    } else if (active == inverse) {
      binds.push_back(bind_string("mode", mode));
      binds.push_back(bind_double("truncation-K", trunc_k));
      binds.push_back(bind_double("z-lo", z_lo));
      binds.push_back(bind_double("z-hi", z_hi));
      binds.push_back(bind_int("n", inv_n));
    }
    if (int rc = merge_config(active, config_path, binds)) return rc;
  }
  if (potential_path.empty()) {
    std::fprintf(stderr, "{\"error\": \"invalid_argument\", \"message\": "
                         "\"--potential is required (flag or config)\"}\n");
    return 2;
  }

  PotentialHandle pot;
  if (int rc = load_potential(potential_path, pot)) return rc;
  double v_plus = 0.0, v_minus = 0.0;
  slk_potential_levels(pot.p, &v_plus, &v_minus);

  if (active == scatter) {
    if (zs.empty() || zs.size() % 2 != 0) {
      std::fprintf(stderr, "{\"error\": \"invalid_argument\", \"message\": "
                           "\"--z expects re im pairs\"}\n");
      return 2;
    }
    std::string csv =
        "re_z,im_z,s_plus,s_minus,t_minus_re,t_minus_im,t_plus_re,t_plus_im,"
        "r_minus_re,r_minus_im,r_plus_re,r_plus_im,d_re,d_im\n";
    json rows = json::array();
    for (std::size_t i = 0; i + 1 < zs.size(); i += 2) {
      const slk_point p = make_point(zs[i], zs[i + 1], sheet, boundary, v_plus);
      slk_coefficients c;
      const slk_status st = slk_scattering_eval(pot.p, p, ode_tol, &c);
      if (st != SLK_OK) return report_error(st);
      csv += fmt17(p.re_z) + "," + fmt17(p.im_z) + "," +
             std::to_string(p.s_plus) + "," + std::to_string(p.s_minus) + "," +
             fmt17(c.t_minus.re) + "," + fmt17(c.t_minus.im) + "," +
             fmt17(c.t_plus.re) + "," + fmt17(c.t_plus.im) + "," +
             fmt17(c.r_minus.re) + "," + fmt17(c.r_minus.im) + "," +
             fmt17(c.r_plus.re) + "," + fmt17(c.r_plus.im) + "," +
             fmt17(c.wronskian_d.re) + "," + fmt17(c.wronskian_d.im) + "\n";
      json row;
      row["re_z"] = p.re_z;
      row["im_z"] = p.im_z;
      row["s_plus"] = p.s_plus;
      row["s_minus"] = p.s_minus;
      row["t_minus"] = {c.t_minus.re, c.t_minus.im};
      row["t_plus"] = {c.t_plus.re, c.t_plus.im};
      row["r_minus"] = {c.r_minus.re, c.r_minus.im};
      row["r_plus"] = {c.r_plus.re, c.r_plus.im};
      row["d"] = {c.wronskian_d.re, c.wronskian_d.im};
      rows.push_back(row);
    }
    const std::string out = format == "json" ? rows.dump(2) + "\n" : csv;
    std::fputs(out.c_str(), stdout);
    if (!out_dir.empty())
      write_file(out_dir, format == "json" ? "scatter.json" : "scatter.csv",
                 out);
    return 0;
  }

  if (active == identities) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(v_plus - 5.0 * (v_minus - v_plus),
                                              v_plus + 25.0 * (v_minus - v_plus));
    std::uniform_real_distribution<double> uy(0.0, 1.0);
    const char* sheets[4] = {"pp", "pm", "mp", "mm"};
    double global_max = 0.0;
    int skipped = 0;
    std::string csv = "sheet,re_z,im_z,max_residual\n";
    for (const char* sh : sheets) {
      for (int i = 0; i < n_points; ++i) {
        const double gap = v_minus - v_plus;
        const double x = ux(rng);
        const double u = uy(rng);
        const double y = (0.05 + 20.0 * u * u) * gap * (uy(rng) < 0.5 ? -1 : 1);
        const slk_point p = make_point(x, y, sh, "none", v_plus);
        double res[9];
        const slk_status st = slk_identities_check(pot.p, p, ode_tol, res);
        if (st != SLK_OK) return report_error(st);
        double m = 0.0;
        for (int k = 0; k < 9; ++k) {
          if (res[k] < 0) ++skipped;
          else m = std::max(m, res[k]);
        }
        global_max = std::max(global_max, m);
        csv += std::string(sh) + "," + fmt17(x) + "," + fmt17(y) + "," +
               fmt17(m) + "\n";
      }
    }
    std::printf("%s", csv.c_str());
    std::printf("max_residual,%s\nskipped,%d\n", fmt17(global_max).c_str(),
                skipped);
    if (!out_dir.empty()) write_file(out_dir, "identities.csv", csv);
    if (fail_above > 0.0 && global_max > fail_above) return 4;
    return 0;
  }

  if (active == resonances) {
    if (rect.size() != 4) {
      std::fprintf(stderr, "{\"error\": \"invalid_argument\", \"message\": "
                           "\"--rect re0 re1 im0 im1 is required\"}\n");
      return 2;
    }
    json cfg;
    cfg["sheet"] = sheet;
    cfg["rect"] = rect;
    cfg["tol"] = tol;
    cfg["ode_tol"] = ode_tol;
    cfg["threads"] = threads;
    char* csv = nullptr;
    char* js = nullptr;
    const slk_status st = slk_resonances_locate(
        pot.p, cfg.dump().c_str(), allow_unresolved ? 1 : 0, &csv, &js);
    if (st != SLK_OK && st != SLK_ERR_UNRESOLVED) return report_error(st);
    if (csv && js) {
      std::fputs(format == "json" ? js : csv, stdout);
      if (!out_dir.empty()) {
        write_file(out_dir, "resonances.csv", csv);
        write_file(out_dir, "resonances.json", js);
      }
    }
    slk_string_free(csv);
    slk_string_free(js);
    if (st != SLK_OK) return report_error(st);
    return 0;
  }

  if (active == count) {
    if (predicted < 0.0) {
      double a = 0.0, b = 0.0;
      slk_potential_support_hull(pot.p, &a, &b);
      predicted = 2.0 * (b - a) / 3.14159265358979323846;
    }
    json cfg;
    cfg["select"] = select;
    cfg["r_min"] = rmin;
    cfg["r_max"] = rmax;
    cfg["ratio"] = ratio;
    cfg["predicted_slope"] = predicted;
    cfg["tol"] = tol;
    cfg["ode_tol"] = ode_tol;
    cfg["threads"] = threads;
    char* js = nullptr;
    const slk_status st = slk_counting_report(pot.p, cfg.dump().c_str(), &js);
    if (st != SLK_OK) return report_error(st);
    std::fputs(js, stdout);
    if (!out_dir.empty()) write_file(out_dir, "count.json", js);
    slk_string_free(js);
    return 0;
  }

  if (active == indicator) {
    json cfg;
    cfg["target"] = target;
    cfg["phi"] = phi;
    cfg["r_min"] = ir_min;
    cfg["r_max"] = ir_max;
    cfg["n"] = ir_n;
    cfg["ode_tol"] = ode_tol;
    char* js = nullptr;
    const slk_status st = slk_indicator_report(pot.p, cfg.dump().c_str(), &js);
    if (st != SLK_OK) return report_error(st);
    std::fputs(js, stdout);
    if (!out_dir.empty()) write_file(out_dir, "indicator.json", js);
    slk_string_free(js);
    return 0;
  }

  if (active == inverse) {
    json cfg;
    cfg["mode"] = mode;
    cfg["truncation_k"] = trunc_k;
    if (!std::isnan(z_lo)) cfg["z_lo"] = z_lo;
    if (!std::isnan(z_hi)) cfg["z_hi"] = z_hi;
    cfg["n"] = inv_n;
    cfg["tol"] = tol;
    cfg["ode_tol"] = ode_tol;
    cfg["threads"] = threads;
    char* js = nullptr;
    const slk_status st =
        slk_inverse_roundtrip_report(pot.p, cfg.dump().c_str(), &js);
    if (st != SLK_OK) return report_error(st);
    std::fputs(js, stdout);
    if (!out_dir.empty()) write_file(out_dir, "inverse.json", js);
    slk_string_free(js);
    return 0;
  }

  return 1;
}
