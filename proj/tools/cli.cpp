#include "cli.hpp"

#include "ckn/parallel.hpp"
#include "ckn/probe.hpp"
#include "ckn/serialize.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace ckn {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParamFlags {
  int n = 0;
  std::string p, q, r, a, b, c;
};

void add_param_flags(CLI::App* cmd, ParamFlags& f, bool with_c, bool required = true) {
  cmd->add_option("--n", f.n, "dimension N >= 1")->required(required);
  cmd->add_option("--p", f.p, "gradient exponent")->required(required);
  cmd->add_option("--q", f.q, "source exponent")->required(required);
  cmd->add_option("--r", f.r, "target exponent")->required(required);
  cmd->add_option("--a", f.a, "source weight power")->required(required);
  cmd->add_option("--b", f.b, "gradient weight power")->required(required);
  if (with_c) cmd->add_option("--c", f.c, "target weight power")->required(required);
}

Rational parse_flag(const std::string& flag, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const ParseError& e) {
    throw InputError("--" + flag + ": " + e.what());
  }
}

Params to_params(const ParamFlags& f, bool with_c) {
  Params pr;
  pr.n = f.n;
  pr.p = parse_flag("p", f.p);
  pr.q = parse_flag("q", f.q);
  pr.r = parse_flag("r", f.r);
  pr.a = parse_flag("a", f.a);
  pr.b = parse_flag("b", f.b);
  pr.c = with_c ? parse_flag("c", f.c) : Rational(0);
  return pr;
}

void validate_or_throw(const Params& pr, Regime regime) {
  try {
    validate(pr, regime);
  } catch (const InvalidParams& e) {
    throw InputError(e.what());
  }
}

Json read_json_file(const std::string& path, const std::string& flag) {
  std::ifstream in(path);
  if (!in) throw InputError(flag + ": cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(flag + ": " + e.what());
  }
}

void print(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

int exit_for(bool embeds) { return embeds ? kExitEmbeds : kExitNoEmbedding; }

// --- classify -------------------------------------------------------------

struct ClassifyOpts {
  ParamFlags flags;
  bool radial = false;
  bool w0 = false;
  std::string multiweight;
};

int cmd_classify(const ClassifyOpts& o, std::ostream& out) {
  if (!o.multiweight.empty()) {
    MultiWeightSpec spec;
    try {
      spec = multiweight_from_json(read_json_file(o.multiweight, "--multiweight"));
    } catch (const ParseError& e) {
      throw InputError(std::string("--multiweight: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("--multiweight: ") + e.what());
    }
    MultiWeightVerdict v;
    try {
      v = multiweight_classify(spec);
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("--multiweight: ") + e.what());
    }
    Json j = to_json(v);
    j["spec"] = to_json(spec);
    print(out, j);
    return exit_for(v.decision == Decision::Embeds);
  }
  for (auto [name, value] : {std::pair{"n", o.flags.n != 0}, {"p", !o.flags.p.empty()}, {"q", !o.flags.q.empty()},
                             {"r", !o.flags.r.empty()}, {"a", !o.flags.a.empty()}, {"b", !o.flags.b.empty()},
                             {"c", !o.flags.c.empty()}})
    if (!value) throw InputError(std::string("--") + name + " is required");
  Params pr = to_params(o.flags, true);
  if (o.w0) {
    validate_or_throw(pr, Regime::Full);
    W0Verdict v = classify_w0(pr);
    Json j = to_json(v);
    j["params"] = to_json(pr);
    j["derived"] = to_json(derive(pr));
    print(out, j);
    return exit_for(v.decision == W0Decision::Embeds);
  }
  validate_or_throw(pr, o.radial ? Regime::Radial : Regime::Full);
  Verdict v = o.radial ? classify_radial(pr) : classify(pr);
  Json j = verdict_report(pr, v);
  j["regime"] = o.radial ? "radial" : "full";
  print(out, j);
  return exit_for(v.embeds());
}

// --- interval / theta ------------------------------------------------------

int cmd_interval(const ParamFlags& f, std::ostream& out) {
  Params pr = to_params(f, false);
  validate_or_throw(pr, Regime::Full);
  Json params = to_json(pr);
  params.erase("c");
  Json j;
  j["params"] = params;
  j["admissible_set"] = to_json(admissible_set(pr));
  print(out, j);
  return kExitEmbeds;
}

int cmd_theta(const ParamFlags& f, std::ostream& out) {
  Params pr = to_params(f, true);
  validate_or_throw(pr, Regime::Full);
  Verdict v = classify(pr);
  Json j;
  j["params"] = to_json(pr);
  j["verdict"] = to_json(v);
  if (!v.embeds()) {
    print(out, j);
    return kExitNoEmbedding;
  }
  j["theta_set"] = to_json(theta_set(pr));
  print(out, j);
  return kExitEmbeds;
}

// --- verify / falsify --------------------------------------------------------

struct ProbeOpts {
  ParamFlags flags;
  std::string theta;
  bool harmonic = false;
};

constexpr double kDefectTolerance = 1e-6;

std::optional<Rational> default_theta(const ThetaSet& t) {
  switch (t.kind) {
    case ThetaSet::Kind::Single: return t.lo;
    case ThetaSet::Kind::ClosedRange: return t.hi;
    case ThetaSet::Kind::TrivialZero: return Rational(0);
    case ThetaSet::Kind::Empty: return std::nullopt;
  }
  return std::nullopt;
}

int cmd_verify(const ProbeOpts& o, std::ostream& out, std::ostream& err) {
  Params pr = to_params(o.flags, true);
  validate_or_throw(pr, Regime::Full);
  if (o.harmonic && pr.n < 2) throw InputError("--harmonic: needs --n >= 2");
  Verdict v = classify(pr);
  Json j;
  j["verdict"] = to_json(v);
  if (!v.embeds()) {
    j["params"] = to_json(pr);
    j["error"] = "verify needs an embedding instance";
    print(out, j);
    err << "error: classifier reports DoesNotEmbed; use falsify\n";
    return kExitMismatch;
  }
  ThetaSet ts = theta_set(pr);
  std::optional<Rational> theta = o.theta.empty() ? default_theta(ts) : parse_flag("theta", o.theta);
  if (theta && (*theta < Rational(0) || *theta > Rational(1))) throw InputError("--theta: must lie in [0, 1]");
  auto cfg = QuadratureConfig::from_env();
  auto rep = verify_instance(pr, theta, verification_family(pr, o.harmonic ? Angular::FirstHarmonic : Angular::Radial),
                             kDefaultScales, cfg);
  Json body = rep.to_json();
  for (auto& [k, val] : body.items()) j[k] = val;
  j["theta_set"] = to_json(ts);
  if (theta) j["theta_in_set"] = ts.contains(*theta);
  bool scale_ok = !rep.defect || *rep.defect <= kDefectTolerance;
  j["defect_tolerance"] = kDefectTolerance;
  print(out, j);
  if (!rep.ok()) {
    err << "error: " << rep.failure << "\n";
    return kExitMismatch;
  }
  if (!scale_ok) {
    err << "error: multiplicative ratio varies with dilation (defect " << *rep.defect << ")\n";
    return kExitMismatch;
  }
  return kExitEmbeds;
}

int cmd_falsify(const ProbeOpts& o, std::ostream& out, std::ostream& err) {
  Params pr = to_params(o.flags, true);
  validate_or_throw(pr, Regime::Full);
  Verdict v = classify(pr);
  auto cfg = QuadratureConfig::from_env();
  Json j;
  j["verdict"] = to_json(v);
  std::optional<WitnessFamily> w;
  if (!o.theta.empty()) {
    Rational theta = parse_flag("theta", o.theta);
    if (v.embeds() && theta_set(pr).contains(theta)) {
      j["params"] = to_json(pr);
      j["error"] = "theta lies in the proven exponent set";
      print(out, j);
      err << "error: the multiplicative form with this theta is proven\n";
      return kExitMismatch;
    }
    try {
      w = multiplicative_witness(pr, theta.to_double());
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("--theta: ") + e.what());
    }
  } else {
    if (v.embeds()) {
      j["params"] = to_json(pr);
      j["error"] = "falsify needs a non-embedding instance";
      print(out, j);
      err << "error: classifier reports Embeds; use verify\n";
      return kExitMismatch;
    }
    w = witness_for(pr);
  }
  auto rep = falsify_instance(*w, cfg);
  Json body = rep.to_json();
  for (auto& [k, val] : body.items()) j[k] = val;
  print(out, j);
  if (!rep.falsified()) {
    err << "error: " << rep.failure << "\n";
    return kExitMismatch;
  }
  return kExitEmbeds;
}

// --- sweep -----------------------------------------------------------------

struct Axis {
  std::string name;
  Rational start, stop, step;
  std::vector<Rational> values() const {
    std::vector<Rational> out;
    for (Rational x = start; x <= stop; x += step) out.push_back(x);
    return out;
  }
  std::size_t count() const {
    if (stop < start) return 0;
    Rational k = (stop - start) / step;
    return static_cast<std::size_t>(std::floor(k.to_double() + 1e-9)) + 1;
  }
};

const char* const kParamNames[] = {"n", "p", "q", "r", "a", "b", "c"};

void set_param(Params& pr, const std::string& name, const Rational& v) {
  if (name == "n") {
    if (!v.is_integer()) throw InputError("sweep: n must be an integer");
    pr.n = static_cast<int>(v.to_double());
  } else if (name == "p") pr.p = v;
  else if (name == "q") pr.q = v;
  else if (name == "r") pr.r = v;
  else if (name == "a") pr.a = v;
  else if (name == "b") pr.b = v;
  else if (name == "c") pr.c = v;
  else throw InputError("sweep: unknown parameter '" + name + "'");
}

std::string csv_opt(const std::optional<Rational>& x) { return x ? x->str() : ""; }

int cmd_sweep(const std::string& path, std::ostream& out) {
  Json spec = read_json_file(path, "--spec");
  Params base;
  std::vector<Axis> axes;
  std::string format = "csv";
  double cap = 1e6;
  bool radial = false;
  try {
    if (spec.contains("fixed"))
      for (auto& [k, v] : spec.at("fixed").items()) set_param(base, k, rational_from_json(v, "fixed." + k));
    if (spec.contains("axes"))
      for (const auto& a : spec.at("axes")) {
        Axis ax;
        ax.name = a.at("name").get<std::string>();
        ax.start = rational_from_json(a.at("start"), ax.name + ".start");
        ax.stop = rational_from_json(a.at("stop"), ax.name + ".stop");
        ax.step = rational_from_json(a.at("step"), ax.name + ".step");
        if (ax.step.sign() <= 0) throw InputError("sweep: step of '" + ax.name + "' must be positive");
        if (std::find(std::begin(kParamNames), std::end(kParamNames), ax.name) == std::end(kParamNames))
          throw InputError("sweep: unknown parameter '" + ax.name + "'");
        axes.push_back(ax);
      }
    if (spec.contains("format")) format = spec.at("format").get<std::string>();
    if (spec.contains("cap")) cap = spec.at("cap").get<double>();
    if (spec.contains("radial")) radial = spec.at("radial").get<bool>();
  } catch (const ParseError& e) {
    throw InputError(std::string("--spec: ") + e.what());
  } catch (const Json::exception& e) {
    throw InputError(std::string("--spec: ") + e.what());
  }
  if (format != "csv" && format != "json") throw InputError("--spec: format must be csv or json");

  double total = 1;
  for (const auto& ax : axes) total *= static_cast<double>(ax.count());
  if (total > cap) throw InputError("sweep: grid of " + std::to_string(static_cast<long long>(total)) + " points exceeds the cap");
  std::vector<std::vector<Rational>> values;
  for (const auto& ax : axes) values.push_back(ax.values());
  std::size_t count = static_cast<std::size_t>(total);

  struct Row {
    Params pr;
    std::optional<Verdict> v;
    std::optional<DerivedQuantities> d;
    std::string error;
  };
  auto rows = parallel_map(count, [&](std::size_t idx) {
    Row row;
    row.pr = base;
    std::size_t rem = idx;
    for (std::size_t k = axes.size(); k-- > 0;) {
      set_param(row.pr, axes[k].name, values[k][rem % values[k].size()]);
      rem /= values[k].size();
    }
    try {
      validate(row.pr, radial ? Regime::Radial : Regime::Full);
      row.v = radial ? classify_radial(row.pr) : classify(row.pr);
      row.d = derive(row.pr);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  });

  if (format == "csv" && count > 0) out << "n,p,q,r,a,b,c,decision,case,reason,c0,c1,theta_c\n";
  for (const auto& row : rows) {
    const Params& pr = row.pr;
    std::string decision = row.v ? to_string(row.v->decision) : "Invalid";
    std::string tag, reason;
    if (row.v) {
      if (row.v->case_tag) tag = to_string(*row.v->case_tag);
      if (row.v->radial_case) tag = to_string(*row.v->radial_case);
      if (row.v->reason) reason = to_string(*row.v->reason);
    }
    if (format == "csv") {
      out << pr.n << ',' << pr.p.str() << ',' << pr.q.str() << ',' << pr.r.str() << ',' << pr.a.str() << ','
          << pr.b.str() << ',' << pr.c.str() << ',' << decision << ',' << tag << ',' << reason << ','
          << (row.d ? row.d->c0.str() : "") << ',' << (row.d ? row.d->c1.str() : "") << ','
          << (row.d ? csv_opt(row.d->theta_c) : "") << '\n';
    } else {
      Json j = to_json(pr);
      j["decision"] = decision;
      j["case"] = tag.empty() ? Json(nullptr) : Json(tag);
      j["reason"] = reason.empty() ? Json(nullptr) : Json(reason);
      j["c0"] = row.d ? to_json(row.d->c0) : Json(nullptr);
      j["c1"] = row.d ? to_json(row.d->c1) : Json(nullptr);
      j["theta_c"] = row.d && row.d->theta_c ? to_json(*row.d->theta_c) : Json(nullptr);
      if (!row.error.empty()) j["error"] = row.error;
      out << j.dump() << '\n';
    }
  }
  return kExitEmbeds;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted Sobolev embedding classifier and numerical probes", "ckn"};
  app.require_subcommand(1);

  ClassifyOpts classify_opts;
  auto* classify_cmd = app.add_subcommand("classify", "classify an embedding instance");
  add_param_flags(classify_cmd, classify_opts.flags, true, false);
  auto* radial_flag = classify_cmd->add_flag("--radial", classify_opts.radial, "radial subspace");
  auto* w0_flag = classify_cmd->add_flag("--w0", classify_opts.w0, "zero spherical mean subspace");
  classify_cmd->add_option("--multiweight", classify_opts.multiweight, "JSON file with several singularities");
  radial_flag->excludes(w0_flag);

  ParamFlags interval_flags;
  auto* interval_cmd = app.add_subcommand("interval", "admissible values of c");
  add_param_flags(interval_cmd, interval_flags, false);

  ParamFlags theta_flags;
  auto* theta_cmd = app.add_subcommand("theta", "exponents of the multiplicative inequality");
  add_param_flags(theta_cmd, theta_flags, true);

  ProbeOpts verify_opts;
  auto* verify_cmd = app.add_subcommand("verify", "numerical check of an embedding instance");
  add_param_flags(verify_cmd, verify_opts.flags, true);
  verify_cmd->add_option("--theta", verify_opts.theta, "exponent of the multiplicative form");
  verify_cmd->add_flag("--harmonic", verify_opts.harmonic, "first spherical harmonic family");

  ProbeOpts falsify_opts;
  auto* falsify_cmd = app.add_subcommand("falsify", "run the counterexample family");
  add_param_flags(falsify_cmd, falsify_opts.flags, true);
  falsify_cmd->add_option("--theta", falsify_opts.theta, "falsify the multiplicative form with this exponent");

  std::string sweep_spec;
  auto* sweep_cmd = app.add_subcommand("sweep", "classify a parameter grid");
  sweep_cmd->add_option("--spec,spec", sweep_spec, "JSON sweep specification")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitEmbeds;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitEmbeds;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (*classify_cmd) return cmd_classify(classify_opts, out);
    if (*interval_cmd) return cmd_interval(interval_flags, out);
    if (*theta_cmd) return cmd_theta(theta_flags, out);
    if (*verify_cmd) return cmd_verify(verify_opts, out, err);
    if (*falsify_cmd) return cmd_falsify(falsify_opts, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep_spec, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const QuadratureError& e) {
    err << "error: quadrature failure: " << e.what() << "\n";
    return kExitMismatch;
  }
  return kExitInputError;
}

}  // namespace ckn
