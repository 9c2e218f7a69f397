#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cknet/backlund.hpp"
#include "cknet/closed_form.hpp"
#include "cknet/validate.hpp"

namespace cknet::cli {

using nlohmann::json;

int exit_code(ErrorKind kind) {
  if (is_numerical(kind)) return kNumerical;
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::IoError:
      return kParse;
    default:
      return kInvariant;
  }
}

namespace {

// Usage problems detected after CLI11 has accepted the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_real(std::string_view text, std::string_view whole) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::ParseError, "not a complex literal: '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace

std::complex<double> parse_complex(std::string_view text) {
  const std::string_view whole = text;
  if (text.empty()) throw Error(ErrorKind::ParseError, "empty complex literal");
  if (text.back() != 'i') return {parse_real(text[0] == '+' ? text.substr(1) : text, whole), 0.0};
  text.remove_suffix(1);
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = text.size(); i-- > 1;) {
    if ((text[i] == '+' || text[i] == '-') && text[i - 1] != 'e' && text[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const std::string_view re = split == std::string_view::npos ? std::string_view{} : text.substr(0, split);
  std::string_view im = split == std::string_view::npos ? text : text.substr(split);
  double im_value;
  if (im.empty() || im == "+") {
    im_value = 1.0;
  } else if (im == "-") {
    im_value = -1.0;
  } else {
    im_value = parse_real(im[0] == '+' ? im.substr(1) : im, whole);
  }
  const double re_value = re.empty() ? 0.0 : parse_real(re[0] == '+' ? re.substr(1) : re, whole);
  return {re_value, im_value};
}

std::pair<int, int> parse_dims(std::string_view text) {
  const auto x = text.find('x');
  int K = 0, L = 0;
  const auto bad = [&] { return Error(ErrorKind::ParseError, "dims must look like KxL, got '" + std::string(text) + "'"); };
  if (x == std::string_view::npos) throw bad();
  const auto r1 = std::from_chars(text.data(), text.data() + x, K);
  const auto r2 = std::from_chars(text.data() + x + 1, text.data() + text.size(), L);
  if (r1.ec != std::errc() || r1.ptr != text.data() + x || r2.ec != std::errc() || r2.ptr != text.data() + text.size() ||
      K < 1 || L < 1) {
    throw bad();
  }
  return {K, L};
}

namespace {

struct Options {
  std::string output;
  std::string config;

  // surfaces and transforms
  std::string surface;
  std::string dims = "20x20";
  int k0 = 0;
  int l0 = 0;
  double alpha = M_PI / 2;
  double theta = M_PI / 2;
  double t = 0.0;
  double mu = 0.0;
  double q = 0.0;
  std::string tan_half;
  double delta1 = 0.3;
  double delta2 = 0.2;
  double epsilon = 1.0;
  int phi_steps = 24;

  // Lax input
  std::string lax;
  bool line = false;
  bool complete = false;
  std::string lax_out;

  // validation / comparison
  std::string net;
  std::string other;
  std::string checks = "edge-constraint,curvature";
  double tol = 1e-8;
  std::optional<double> tol_edge;
  std::optional<double> tol_curvature;
  std::optional<double> tol_circularity;
  double target_K = -1.0;
  bool positions_only = false;
  std::string mode = "rigid";
  std::string format = "obj";
};

Dims dims_of(const Options& o) {
  const auto [K, L] = parse_dims(o.dims);
  return {K, L};
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + o.output + " for writing");
  f << text;
  if (!f) throw Error(ErrorKind::IoError, "failed writing " + o.output);
}

void emit_net(const Options& o, const QuadNet& net, std::ostream& out) { emit(o, dump_json(net_to_json(net)), out); }

bool given(const CLI::App* sub, const std::string& name) { return sub->get_option("--" + name)->count() > 0; }

// --- generate ----------------------------------------------------------------

const std::map<std::string, std::set<std::string>>& generator_schema() {
  static const std::map<std::string, std::set<std::string>> schema{
      {"line", {"delta1", "delta2", "t"}},
      {"dini", {"alpha", "theta", "delta1", "delta2", "t"}},
      {"pseudosphere", {"epsilon", "phi-steps"}},
      {"pseudosphere-family", {"theta", "delta1", "delta2", "t"}},
      {"breather", {"mu", "q", "delta1", "delta2", "t"}},
      {"kuen", {"delta1", "delta2", "t"}},
  };
  return schema;
}

const std::vector<std::string>& surface_parameters() {
  static const std::vector<std::string> names{"alpha", "theta", "t",       "mu",       "q",
                                              "delta1", "delta2", "epsilon", "phi-steps"};
  return names;
}

int cmd_generate(const Options& o, const CLI::App* sub, std::ostream& out) {
  const auto& allowed = generator_schema().at(o.surface);
  for (const auto& p : surface_parameters()) {
    if (given(sub, p) && !allowed.count(p)) {
      throw UsageError("--" + p + " does not apply to surface '" + o.surface + "'");
    }
  }
  const closed_form::Window w{dims_of(o), o.k0, o.l0};
  const auto d = closed_form::Deltas::constant(o.delta1, o.delta2);
  QuadNet net;
  if (o.surface == "line") {
    net = closed_form::gen_line(w, d, o.t);
  } else if (o.surface == "dini") {
    net = closed_form::gen_dini(w, o.alpha, o.theta, d, o.t);
  } else if (o.surface == "pseudosphere") {
    net = closed_form::gen_tractrix_pseudosphere(w, o.epsilon, o.phi_steps);
  } else if (o.surface == "pseudosphere-family") {
    net = closed_form::gen_pseudosphere_family(w, o.theta, d, o.t);
  } else if (o.surface == "breather") {
    if (given(sub, "mu") == given(sub, "q")) throw UsageError("breather needs exactly one of --mu and --q");
    const double mu = given(sub, "q") ? closed_form::breather_mu(o.q, o.delta2) : o.mu;
    net = closed_form::gen_breather(w, mu, o.delta1, o.delta2, o.t);
    const auto period = closed_form::breather_period(mu, o.delta2);
    net.meta()["period_l"] = period ? json(*period) : json(nullptr);
  } else {
    net = closed_form::gen_kuen(w, o.delta1, o.delta2, o.t);
  }
  emit_net(o, net, out);
  return kOk;
}

// --- Lax pipelines -----------------------------------------------------------

CknetLaxField base_field(const Options& o, const CLI::App* sub) {
  if (o.line == !o.lax.empty()) throw UsageError("give exactly one of --lax and --line");
  if (o.line) {
    if (given(sub, "complete")) throw UsageError("--complete needs --lax");
    return closed_form::line_lax_field(dims_of(o), closed_form::Deltas::constant(o.delta1, o.delta2));
  }
  for (const char* p : {"dims", "delta1", "delta2"}) {
    if (given(sub, p)) throw UsageError(std::string("--") + p + " only applies with --line");
  }
  CknetLaxField field = lax_io_read(o.lax);
  if (o.complete) field = cklax::complete_field(field);
  return field;
}

json pipeline_meta(const Options& o, const char* name) {
  json meta = {{"generator", name}, {"t", o.t}};
  if (o.line) {
    meta["base"] = {{"line", {{"delta1", o.delta1}, {"delta2", o.delta2}}}};
  } else {
    meta["base"] = {{"lax", o.lax}};
  }
  return meta;
}

int cmd_evolve(const Options& o, const CLI::App* sub, std::ostream& out) {
  const CknetLaxField field = base_field(o, sub);
  auto result = cklax::integrate(field, o.t);
  result.net.meta() = pipeline_meta(o, "lax");
  if (!o.lax_out.empty()) lax_io_write(field, o.lax_out);
  emit_net(o, result.net, out);
  return kOk;
}

int cmd_backlund(const Options& o, const CLI::App* sub, std::ostream& out) {
  const CknetLaxField field = base_field(o, sub);
  const backlund::Params p{o.alpha, o.theta};
  p.check();
  const auto base = cklax::integrate(field, o.t);
  auto tr = backlund::transform(field, base.frame, p);
  tr.net.meta() = pipeline_meta(o, "backlund");
  tr.net.meta()["alpha"] = o.alpha;
  tr.net.meta()["theta"] = o.theta;
  if (!o.lax_out.empty()) lax_io_write(tr.field, o.lax_out);
  emit_net(o, tr.net, out);
  return kOk;
}

int cmd_double(const Options& o, const CLI::App* sub, std::ostream& out) {
  const int choices = int(given(sub, "mu")) + int(given(sub, "alpha")) + int(given(sub, "tan-half"));
  if (choices != 1) throw UsageError("give exactly one of --mu, --alpha and --tan-half");
  const CknetLaxField field = base_field(o, sub);
  backlund::DoubleParams p;
  json param;
  if (given(sub, "mu")) {
    p = backlund::DoubleParams::from_mu(o.mu);
    param = {"mu", o.mu};
  } else if (given(sub, "alpha")) {
    p = backlund::DoubleParams::from_alpha(o.alpha);
    param = {"alpha", o.alpha};
  } else {
    p.tan_half = parse_complex(o.tan_half);
    param = {"tan_half", {p.tan_half.real(), p.tan_half.imag()}};
  }
  const auto base = cklax::integrate(field, o.t);
  QuadNet net = backlund::double_transform(field, base.frame, p);
  net.meta() = pipeline_meta(o, "double-backlund");
  net.meta()[param[0].get<std::string>()] = param[1];
  emit_net(o, net, out);
  return kOk;
}

// --- validation --------------------------------------------------------------

std::set<std::string> split_checks(const std::string& list) {
  std::set<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  if (out.empty()) throw UsageError("--checks is empty");
  return out;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const auto checks = split_checks(o.checks);
  const QuadNet net = net_io_read(o.net);
  validate::Tolerances tol{o.tol, o.tol, o.tol, o.target_K};
  if (o.tol_edge) tol.edge = *o.tol_edge;
  if (o.tol_curvature) tol.curvature = *o.tol_curvature;
  if (o.tol_circularity) tol.circularity = *o.tol_circularity;
  const json report = validate::validation_report(net, checks, tol);
  emit(o, dump_json(report), out);
  return report.at("pass").get<bool>() ? kOk : kInvariant;
}

int cmd_compare(const Options& o, std::ostream& out) {
  const QuadNet a = net_io_read(o.net);
  const QuadNet b = net_io_read(o.other);
  if (a.dims() != b.dims()) throw Error(ErrorKind::DimensionMismatch, "nets have different dims");
  json report = {{"mode", o.mode}, {"tolerance", o.tol}};
  double pos = 0.0, nrm = 0.0;
  if (o.mode == "rigid") {
    const auto c = validate::congruent_up_to_rigid_motion(a, b);
    pos = c.residual;
    nrm = c.normal_residual;
    report["rotation"] = json::array();
    for (const Vec3& r : c.motion.rows) report["rotation"].push_back({r.x, r.y, r.z});
    report["shift"] = {c.motion.shift.x, c.motion.shift.y, c.motion.shift.z};
  } else {
    for (std::size_t i = 0; i < a.positions().size(); ++i) {
      pos = std::max(pos, norm(a.positions().values()[i] - b.positions().values()[i]));
      nrm = std::max(nrm, norm(a.normals().values()[i] - b.normals().values()[i]));
    }
  }
  const bool pass = pos < o.tol && (o.positions_only || nrm < o.tol);
  report["residual"] = pos;
  report["normal_residual"] = nrm;
  report["positions_only"] = o.positions_only;
  report["pass"] = pass;
  emit(o, dump_json(report), out);
  return pass ? kOk : kInvariant;
}

int cmd_export(const Options& o, std::ostream& out) {
  const QuadNet net = net_io_read(o.net);
  if (o.format == "obj") {
    if (o.output.empty()) {
      export_obj(net, out);
    } else {
      export_obj(net, std::filesystem::path(o.output));
    }
  } else {
    emit(o, dump_json(net_to_json(net)), out);
  }
  return kOk;
}

// --- config files ------------------------------------------------------------

std::string config_token(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  if (v.is_array()) {
    std::string joined;
    for (const auto& item : v) {
      if (!item.is_string()) throw Error(ErrorKind::ParseError, "config: '" + key + "' must be a list of strings");
      joined += (joined.empty() ? "" : ",") + item.get<std::string>();
    }
    return joined;
  }
  throw Error(ErrorKind::ParseError, "config: unsupported value for '" + key + "'");
}

// Turns the config file into command-line tokens placed before the real
// arguments, so explicit flags win.
std::vector<std::string> config_tokens(const std::string& path, CLI::App* sub) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
  if (!cfg.is_object()) throw Error(ErrorKind::ParseError, path + ": expected an object");
  std::vector<std::string> tokens;
  for (const auto& [key, value] : cfg.items()) {
    const CLI::Option* opt = key == "config" ? nullptr : sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw Error(ErrorKind::ParseError, path + ": unknown key '" + key + "'");
    if (opt->get_expected_min() == 0) {
      if (!value.is_boolean()) throw Error(ErrorKind::ParseError, path + ": '" + key + "' must be a boolean");
      if (value.get<bool>()) tokens.push_back("--" + key);
      continue;
    }
    tokens.push_back("--" + key);
    tokens.push_back(config_token(value, key));
  }
  return tokens;
}

std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

struct App {
  CLI::App app{"Circular K-nets: generators, transforms, validation and export", "cknet"};
  Options o;
  std::map<std::string, CLI::App*> subs;

  App() {
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    auto* gen = add("generate", "Evaluate a closed-form net");
    gen->add_option("--surface", o.surface, "Surface name")
        ->required()
        ->check(CLI::IsMember({"line", "dini", "pseudosphere", "pseudosphere-family", "breather", "kuen"}));
    add_window(gen);
    add_surface_params(gen);

    auto* evo = add("evolve", "Integrate a cK-net Lax field");
    add_base(evo);

    auto* bt = add("backlund", "Single Baecklund transform of a Lax field");
    add_base(bt);
    bt->add_option("--alpha", o.alpha, "Transform angle")->capture_default_str();
    bt->add_option("--theta", o.theta, "Initial phase of s~(0,0)")->capture_default_str();

    auto* dbl = add("double-backlund", "Double Baecklund transform via the B matrix");
    add_base(dbl);
    dbl->add_option("--mu", o.mu, "tan(delta/2) = e^{i mu}");
    dbl->add_option("--alpha", o.alpha, "Real pair alpha, pi - alpha");
    dbl->add_option("--tan-half", o.tan_half, "tan(delta/2) as a complex literal, e.g. 0.6+0.8i");

    auto* val = add("validate", "Check a net against the cK-net conditions");
    val->add_option("net,--net", o.net, "Net JSON file")->required();
    val->add_option("--checks", o.checks, "Comma-separated: edge-constraint, curvature, circularity")
        ->capture_default_str();
    val->add_option("--tol", o.tol, "Tolerance for every check")->capture_default_str();
    val->add_option("--tol-edge", o.tol_edge, "Edge-constraint tolerance");
    val->add_option("--tol-curvature", o.tol_curvature, "Curvature tolerance");
    val->add_option("--tol-circularity", o.tol_circularity, "Circularity tolerance");
    val->add_option("--target-K", o.target_K, "Expected Gauss curvature")->capture_default_str();

    auto* cmp = add("compare", "Compare two nets up to a rigid motion");
    cmp->add_option("net,--net", o.net, "First net")->required();
    cmp->add_option("other,--other", o.other, "Second net")->required();
    cmp->add_option("--tol", o.tol, "Residual tolerance")->capture_default_str();
    cmp->add_option("--mode", o.mode, "rigid or exact")->check(CLI::IsMember({"rigid", "exact"}))->capture_default_str();
    cmp->add_flag("--positions-only", o.positions_only, "Ignore normals");

    auto* exp = add("export", "Write a net as a mesh");
    exp->add_option("net,--net", o.net, "Net JSON file")->required();
    exp->add_option("--format", o.format, "obj or json")->check(CLI::IsMember({"obj", "json"}))->capture_default_str();
  }

  CLI::App* add(const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("-o,--output", o.output, "Output file (default stdout)");
    sub->add_option("--config", o.config, "JSON file with option values");
    subs[name] = sub;
    return sub;
  }

  void add_window(CLI::App* sub) {
    sub->add_option("--dims", o.dims, "Window size KxL")->capture_default_str();
    sub->add_option("--k0", o.k0, "Lattice index of the first column")->capture_default_str();
    sub->add_option("--l0", o.l0, "Lattice index of the first row")->capture_default_str();
  }

  void add_surface_params(CLI::App* sub) {
    sub->add_option("--alpha", o.alpha, "Transform angle")->capture_default_str();
    sub->add_option("--theta", o.theta, "Initial phase")->capture_default_str();
    sub->add_option("--t", o.t, "Spectral parameter, lambda = e^t")->capture_default_str();
    sub->add_option("--mu", o.mu, "Breather parameter");
    sub->add_option("--q", o.q, "Breather closure ratio, mu = -asin(cot(delta2) tan(q delta2))");
    sub->add_option("--delta1", o.delta1, "Parameter line angle along k")->capture_default_str();
    sub->add_option("--delta2", o.delta2, "Parameter line angle along l")->capture_default_str();
    sub->add_option("--epsilon", o.epsilon, "Tractrix step in (0, 2)")->capture_default_str();
    sub->add_option("--phi-steps", o.phi_steps, "Rotation steps per turn")->capture_default_str();
  }

  void add_base(CLI::App* sub) {
    sub->add_option("--lax", o.lax, "Lax field JSON");
    sub->add_flag("--line", o.line, "Use the straight line as base");
    sub->add_flag("--complete", o.complete, "Fill the interior of --lax from row 0 and column 0");
    sub->add_option("--lax-out", o.lax_out, "Write the Lax field used or produced");
    sub->add_option("--dims", o.dims, "Window size KxL for --line")->capture_default_str();
    sub->add_option("--delta1", o.delta1, "Line angle along k")->capture_default_str();
    sub->add_option("--delta2", o.delta2, "Line angle along l")->capture_default_str();
    sub->add_option("--t", o.t, "Spectral parameter, lambda = e^t")->capture_default_str();
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  App a;
  std::vector<std::string> tokens = args;
  try {
    if (!args.empty() && a.subs.count(args[0])) {
      if (auto path = find_config(args)) {
        auto extra = config_tokens(*path, a.subs.at(args[0]));
        tokens.insert(tokens.begin() + 1, extra.begin(), extra.end());
      }
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.kind());
  }

  std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
  try {
    a.app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << a.app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << a.app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  const Options& o = a.o;
  try {
    for (const auto& [name, sub] : a.subs) {
      if (!sub->parsed()) continue;
      if (name == "generate") return cmd_generate(o, sub, out);
      if (name == "evolve") return cmd_evolve(o, sub, out);
      if (name == "backlund") return cmd_backlund(o, sub, out);
      if (name == "double-backlund") return cmd_double(o, sub, out);
      if (name == "validate") return cmd_validate(o, out);
      if (name == "compare") return cmd_compare(o, out);
      if (name == "export") return cmd_export(o, out);
    }
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code(e.kind());
  }
  return kUsage;
}

}  // namespace cknet::cli
