#include "symconv/error.hpp"
#include "symconv/harness.hpp"
#include "symconv/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace symconv;

namespace {

struct Flags {
  std::string preset, chamber, a_log, radius, checks, config, out, format = "json", x, datum, in;
  std::size_t samples = 0;
  double tol = 0;
  std::uint64_t seed = 0;
  bool timing = false;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

QVector parse_qvector(const std::string& s) {
  std::vector<Rational> v;
  try {
    for (const auto& t : split(s)) v.push_back(parse_rational(t));
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ConfigError, "cannot parse vector '" + s + "'");
  }
  return QVector(std::move(v));
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--preset", f.preset, "kostant_sl2, sl2_so11, sl3_so21 or group_sl2");
  app->add_option("--chamber", f.chamber, "chamber vector of the positive system, comma separated");
  app->add_option("--a-log", f.a_log, "a-coordinates of log a, comma separated rationals");
  app->add_option("--samples", f.samples, "samples per radius");
  app->add_option("--radius", f.radius, "radius schedule, comma separated and increasing");
  app->add_option("--tol", f.tol, "membership tolerance");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--out", f.out, "output file (default stdout)");
  app->add_option("--format", f.format, "json, csv or svg");
  app->add_option("--config", f.config, "JSON config; flags override it");
  app->add_flag("--timing", f.timing, "record the runtime in the report");
}

VerificationConfig build_config(const CLI::App* app, const Flags& f) {
  VerificationConfig c;
  if (!f.config.empty()) c = config_from_json(read_json_file(f.config), c);
  if (app->count("--preset")) c.preset = f.preset;
  if (app->count("--chamber")) c.chamber = parse_qvector(f.chamber);
  if (app->count("--a-log")) c.a_log = parse_qvector(f.a_log);
  if (app->count("--samples")) c.samples = f.samples;
  if (app->count("--radius")) {
    c.radii.clear();
    for (const auto& t : split(f.radius)) {
      try {
        c.radii.push_back(std::stod(t));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ConfigError, "bad radius " + t);
      }
    }
  }
  if (app->count("--tol")) c.tol = f.tol;
  if (app->count("--seed")) c.seed = f.seed;
  if (app->get_option_no_throw("--checks") && app->count("--checks")) {
    c.checks.clear();
    for (const auto& t : split(f.checks)) c.checks.insert(parse_check(t));
  }
  if (f.timing) c.timing = true;
  c.validate();
  return c;
}

void write_out(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream o(path, std::ios::binary);
  if (!o) throw Error(ErrorCode::IoError, "cannot open " + path);
  o << text;
}

void summarize(const Report& r) {
  for (const auto& c : r.checks)
    std::cerr << (c.skipped ? "SKIP " : c.pass ? "PASS " : "FAIL ") << c.name << "  (" << c.count << " evaluated, "
              << c.failures << " failed)\n";
}

int emit(const Report& r, const Flags& f) {
  Format fmt = parse_format(f.format);
  if (f.out.empty())
    std::cout << render(r, fmt);
  else
    emit_report(r, fmt, f.out);
  summarize(r);
  return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convexity checks for Iwasawa projections of symmetric subgroups"};
  app.require_subcommand(1);
  Flags f;

  auto* verify = app.add_subcommand("verify", "sample H-orbits and test them against Omega");
  add_common(verify, f);
  verify->add_option("--checks", f.checks,
                     "comma separated: main, kostant, gk, hessian, critical_image, inclusion_cone, no_line, limits");

  auto* gk = app.add_subcommand("gk", "Gindikin-Karpelevic images over all pairs of positive systems");
  add_common(gk, f);

  auto* hess = app.add_subcommand("hessian", "Hessians of F at the critical points");
  add_common(hess, f);
  hess->add_option("--x", f.x, "a-coordinates of X in a_q, comma separated")->required();

  auto* ext = app.add_subcommand("extremize", "reflection walk to an h-extreme positive system");
  add_common(ext, f);
  ext->add_option("--datum", f.datum, "JSON datum file instead of a preset");

  auto* rep = app.add_subcommand("report", "re-render a JSON report");
  rep->add_option("--in", f.in, "JSON report")->required();
  rep->add_option("--out", f.out, "output file (default stdout)");
  rep->add_option("--format", f.format, "json, csv or svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      VerificationConfig c = build_config(verify, f);
      return emit(run(c), f);
    }
    if (*gk) {
      VerificationConfig c = build_config(gk, f);
      c.checks = {Check::GK};
      return emit(run(c), f);
    }
    if (*hess) {
      VerificationConfig c = build_config(hess, f);
      Realization R = Realization::preset(c.preset);
      PositiveSystem P(R.datum, c.chamber ? *c.chamber : R.base_chamber);
      QVector a_log = c.a_log ? *c.a_log : preset_defaults(c.preset).a_log;
      QVector X = parse_qvector(f.x);
      if (X.size() != R.datum->dim() || a_log.size() != R.datum->dim())
        throw Error(ErrorCode::ConfigError, "vector has wrong dimension");
      std::optional<CriticalInput> in;
      try {
        in.emplace(R, P, a_log, X);
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, e.what());
      }
      Json out;
      out["preset"] = c.preset;
      out["a_log"] = to_json(a_log);
      out["X"] = to_json(X);
      out["kernel_dim_numeric"] = kernel_dim_numeric(*in);
      Json list = Json::array();
      bool ok = true;
      for (const auto& r : critical_reps(*in)) {
        HessianReport h = hessian(*in, r.w);
        Json j = to_json(h);
        j["critical_value"] = to_string(r.value);
        list.push_back(j);
        ok = ok && h.max_rel_error <= 1e-6 && h.posdef_numeric == h.prediction.posdef &&
             static_cast<std::size_t>(h.signature.n_zero) == h.prediction.kernel_dim;
      }
      out["critical_points"] = list;
      out["pass"] = ok;
      write_out(out.dump(2) + "\n", f.out);
      return ok ? 0 : 1;
    }
    if (*ext) {
      DatumPtr d;
      QVector chamber;
      if (!f.datum.empty()) {
        d = std::make_shared<const SymmetricPairDatum>(datum_from_json(read_json_file(f.datum)));
        chamber = default_chamber(*d);
      } else {
        Realization R = Realization::preset(f.preset.empty() ? "sl3_so21" : f.preset);
        d = R.datum;
        chamber = R.base_chamber;
      }
      if (!f.chamber.empty()) chamber = parse_qvector(f.chamber);
      std::optional<PositiveSystem> P;
      try {
        P.emplace(d, chamber);
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, e.what());
      }
      ExtremizeResult r = h_extremize(*P);
      Json j = to_json(r);
      write_out(j.dump(2) + "\n", f.out);
      return j["postconditions"].get<bool>() ? 0 : 1;
    }
    if (*rep) {
      Report r = report_from_json(read_json_file(f.in));
      Format fmt = parse_format(f.format);
      if (f.out.empty())
        std::cout << render(r, fmt);
      else
        emit_report(r, fmt, f.out);
      return r.pass() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError || e.code() == ErrorCode::IoError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}
