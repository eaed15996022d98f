// SPDX-License-Identifier: Apache-2.0
// Command-line front end for the rsm library.
#include "rsm/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rsm/arith.hpp"
#include "rsm/errors.hpp"
#include "rsm/hecke.hpp"
#include "rsm/lseries.hpp"
#include "rsm/moments.hpp"
#include "rsm/parallel.hpp"
#include "rsm/quad_orders.hpp"
#include "rsm/shifted.hpp"
#include "rsm/special.hpp"

#ifndef RSM_VERSION
#define RSM_VERSION "0.0.0"
#endif

namespace rsm {

using json = nlohmann::json;

namespace {

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> forms{"delta"};
  i64 disc = -4;
  i64 conductor = 1;
  int k = -1;  // -1: generic parity from the root number
  int threads = 1;
  std::string format = "json";
  std::string output;
  u64 pmax = 0;  // 0: per-form default
  i64 basechange = 0;
  double tolerance = 1e-8;
  double A = 30.0;
  double B = 10.0;
  double balance = 1.0;
  double test_a = 0.0;
  int character = -1;  // -1: all characters
  std::string route = "both";
  std::vector<i64> ordering;
  bool main_term = true;
  std::vector<i64> q_list{1, 2, 4, 8};
  std::vector<double> Y_list{1e3, 1e4, 1e5};
  std::string window = "compact";
  bool fit = false;
  int whittaker_q = 0;
  double whittaker_p = 0.0;
  bool have_p = false;
  double nu_re = 0.0;
  double nu_im = 0.0;
  double ymin = 1e-5;
  double ymax = 10.0;
  int points = 50;
};

u64 default_pmax(const std::string& spec) { return spec == "delta" ? 2200000 : 1000000; }

json config_echo(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["threads"] = c.threads;
  j["format"] = c.format;
  if (c.subcommand == "classgroup" || c.subcommand == "central" || c.subcommand == "average") {
    j["disc"] = c.disc;
    j["conductor"] = c.conductor;
  }
  if (c.subcommand == "central" || c.subcommand == "average" || c.subcommand == "shifted") {
    j["forms"] = c.forms;
    json p = json::array();
    for (const auto& f : c.forms) p.push_back(c.pmax ? c.pmax : default_pmax(f));
    j["pmax"] = p;
  }
  if (c.subcommand == "central" || c.subcommand == "average") {
    j["k"] = c.k;
    j["basechange"] = c.basechange;
    j["basechange_default"] = c.basechange <= 0;
    j["A"] = c.A;
    j["B"] = c.B;
    j["test_a"] = c.test_a;
  }
  if (c.subcommand == "central") {
    j["tolerance"] = c.tolerance;
    j["balance"] = c.balance;
    j["character"] = c.character;
  }
  if (c.subcommand == "average") {
    j["route"] = c.route;
    j["ordering"] = c.ordering;
    j["main_term"] = c.main_term;
  }
  if (c.subcommand == "shifted") {
    j["q"] = c.q_list;
    j["Y"] = c.Y_list;
    j["window"] = c.window;
    j["fit"] = c.fit;
  }
  if (c.subcommand == "whittaker") {
    if (c.have_p)
      j["p"] = c.whittaker_p;
    else
      j["q"] = c.whittaker_q;
    j["nu"] = {c.nu_re, c.nu_im};
    j["ymin"] = c.ymin;
    j["ymax"] = c.ymax;
    j["points"] = c.points;
  }
  return j;
}

json provenance(const RunConfig& c) {
  json p;
  p["version"] = RSM_VERSION;
  p["config"] = config_echo(c);
  const auto& sc = special_config();
  p["tolerances"] = {{"quadrature_panel_width", sc.panel_width},
                     {"quadrature_decay_cut", sc.decay_cut},
                     {"cutoff_nodes_per_decade", sc.nodes_per_decade},
                     {"theta", kTheta},
                     {"delta", kDelta}};
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  p["timestamp"] = buf;
  return p;
}

// CSV output: header, rows, and comment lines carrying the provenance.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void row(const std::vector<std::string>& cells) { rows_.push_back(cells); }
  void write(std::ostream& os, const json& prov) const {
    os << "# " << prov.dump() << "\n";
    write_row(os, header_);
    for (const auto& r : rows_) write_row(os, r);
  }

 private:
  static void write_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
    os << "\r\n";
  }
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string fmt(double v) { return format_double(v); }
std::string fmt(i64 v) { return std::to_string(v); }

std::string join_ints(const std::vector<i64>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

struct Output {
  json doc;
  std::optional<CsvTable> csv;
};

TensorCoefficients load_tensor(const RunConfig& c) {
  std::vector<EigenSystem> f;
  for (const auto& s : c.forms) f.push_back(load_form(s, c.pmax ? c.pmax : default_pmax(s)));
  return TensorCoefficients(std::move(f));
}

json character_json(const RingClassCharacter& om) {
  return {{"exponents", om.exponent_vector()}, {"conductor", om.conductor()}};
}

// ---------------------------------------------------------------------------

Output cmd_classgroup(const RunConfig& c) {
  const FormClassGroup G(c.disc, c.conductor);
  const auto chars = characters(G);
  Output o;
  json r;
  r["D_K"] = c.disc;
  r["conductor"] = c.conductor;
  r["discriminant"] = G.order().discriminant;
  r["w"] = G.order().unit_count;
  r["h"] = G.class_number();
  r["h_dedekind"] = dedekind_class_number(c.disc, c.conductor);
  r["structure"] = G.structure();
  json classes = json::array();
  for (int i = 0; i < G.class_number(); ++i) {
    const auto& f = G.form(i);
    classes.push_back({{"index", i}, {"form", {f.a, f.b, f.c}}, {"dlog", G.dlog(i)}});
  }
  r["classes"] = classes;
  json cj = json::array();
  o.csv.emplace(std::vector<std::string>{"character", "exponents", "conductor", "class", "a", "b", "c", "re", "im"});
  for (size_t j = 0; j < chars.size(); ++j) {
    json vals = json::array();
    for (int i = 0; i < G.class_number(); ++i) {
      const auto v = chars[j].value(i);
      vals.push_back({v.real(), v.imag()});
      const auto& f = G.form(i);
      o.csv->row({fmt(static_cast<i64>(j)), join_ints(chars[j].exponent_vector()), fmt(chars[j].conductor()),
                  fmt(static_cast<i64>(i)), fmt(f.a), fmt(f.b), fmt(f.c), fmt(v.real()), fmt(v.imag())});
    }
    json e = character_json(chars[j]);
    e["values"] = vals;
    e["value_exponents_mod"] = G.exponent();
    cj.push_back(e);
  }
  r["characters"] = cj;
  o.doc["result"] = r;
  return o;
}

Output cmd_central(const RunConfig& c) {
  const TensorCoefficients T = load_tensor(c);
  const FormClassGroup G(c.disc, c.conductor);
  const auto chars = characters(G);
  if (c.character >= static_cast<int>(chars.size())) throw DomainError("--character index out of range");
  CentralOptions opt;
  opt.tolerance = c.tolerance;
  opt.A = c.A;
  opt.B = c.B;
  opt.balance = c.balance;
  opt.force_k = c.k;
  opt.test_a = c.test_a;
  Output o;
  o.csv.emplace(std::vector<std::string>{"character", "exponents", "conductor", "k", "value", "Y", "root_number",
                                         "stated_root_number", "terms_used", "tail_estimate", "forced_parity"});
  json rows = json::array();
  for (size_t j = 0; j < chars.size(); ++j) {
    if (c.character >= 0 && static_cast<size_t>(c.character) != j) continue;
    const RankinSetup st = make_setup(T, G, chars[j], c.basechange);
    const CentralValueResult r = central_value(st, opt);
    json e = character_json(chars[j]);
    e["index"] = j;
    e["value"] = r.value;
    e["k"] = r.k;
    e["Y"] = r.Y;
    e["root_number"] = r.root_number;
    e["stated_root_number"] = st.stated_root_number;
    e["terms_used"] = r.terms_used;
    e["tail_estimate"] = r.tail_estimate;
    e["forced_parity"] = r.forced_parity;
    e["basechange_conductor"] = st.basechange_conductor;
    rows.push_back(e);
    o.csv->row({fmt(static_cast<i64>(j)), join_ints(chars[j].exponent_vector()), fmt(chars[j].conductor()),
                fmt(static_cast<i64>(r.k)), fmt(r.value), fmt(r.Y), fmt(static_cast<i64>(r.root_number)),
                fmt(static_cast<i64>(st.stated_root_number)), fmt(static_cast<i64>(r.terms_used)),
                fmt(r.tail_estimate), r.forced_parity ? "1" : "0"});
  }
  o.doc["result"] = {{"tensor", T.label()}, {"values", rows}};
  return o;
}

Output cmd_average(const RunConfig& c) {
  const TensorCoefficients T = load_tensor(c);
  const FormClassGroup G(c.disc, c.conductor);
  MomentOptions mo;
  mo.A = c.A;
  mo.B = c.B;
  mo.test_a = c.test_a;
  mo.basechange_conductor = c.basechange;
  mo.ordering = c.ordering;
  if (c.k >= 0) {
    mo.k = c.k;
  } else {
    const auto chars = characters(G);
    const RankinSetup st = make_setup(T, G, chars.front(), c.basechange);
    mo.k = st.k;
  }
  MomentReport rep;
  if (c.route == "a")
    rep = average_route_A(T, G, mo);
  else if (c.route == "b")
    rep = average_route_B(T, c.disc, c.conductor, mo);
  else
    rep = average_both(T, G, mo);

  json r;
  r["D_K"] = rep.D_K;
  r["conductor"] = rep.c;
  r["tensor"] = rep.tensor;
  r["k"] = rep.k;
  r["Y"] = rep.Y;
  r["h"] = rep.h;
  r["w"] = rep.w;
  r["tail_estimate"] = rep.tail_estimate;
  Output o;
  o.csv.emplace(std::vector<std::string>{"row", "exponents", "conductor", "Y", "value", "terms"});
  if (rep.has_A) {
    json pc = json::array();
    for (const auto& v : rep.per_character) {
      pc.push_back({{"exponents", v.exponents}, {"conductor", v.conductor}, {"Y", v.Y}, {"value", v.value},
                    {"terms", v.terms}});
      o.csv->row({"character", join_ints(v.exponents), fmt(v.conductor), fmt(v.Y), fmt(v.value),
                  fmt(static_cast<i64>(v.terms))});
    }
    r["per_character"] = pc;
    r["H_A"] = rep.H_A;
    o.csv->row({"H_A", "", "", fmt(rep.Y), fmt(rep.H_A), ""});
  }
  if (rep.has_B) {
    r["ordering"] = rep.ordering;
    r["D_leading"] = rep.D_leading;
    json dt = json::array();
    for (const auto& d : rep.dtilde)
      dt.push_back({{"e", d.e}, {"from", d.from}, {"to", d.to}, {"weight", d.weight}, {"value", d.value}});
    r["dtilde"] = dt;
    r["parasite"] = rep.parasite;
    r["H_B"] = rep.H_B;
    o.csv->row({"H_B", "", "", fmt(rep.Y), fmt(rep.H_B), ""});
    o.csv->row({"parasite", "", "", "", fmt(rep.parasite), ""});
  }
  if (rep.has_A && rep.has_B) {
    r["route_gap"] = rep.route_gap;
    o.csv->row({"route_gap", "", "", "", fmt(rep.route_gap), ""});
  }
  if (c.main_term && T.size() == 1 && (mo.k == 0 || mo.k == 1)) {
    json m;
    try {
      const MainTermInputs in = main_term_inputs(T, c.disc, c.conductor, c.basechange);
      const double H = rep.has_A ? rep.H_A : rep.H_B;
      const double mt = main_term(in, mo.k);
      const double ms = main_term_s0(in, mo.k);
      m = {{"value", mt},
           {"value_s0", ms},
           {"s0", in.s0},
           {"residual", std::fabs(H - mt)},
           {"residual_s0", std::fabs(H - ms)},
           {"L1_eta", in.L1_eta},
           {"Lprime_over_L", in.Lprime_over_L},
           {"ratio", in.ratio},
           {"ratio_log_derivative", in.ratio_log_derivative},
           {"ratio_s0", in.ratio_s0},
           {"pole_flag", in.pole_flag},
           {"sym2_slope", in.sym2_slope}};
      o.csv->row({"main_term", "", "", fmt(in.Y), fmt(mt), ""});
      o.csv->row({"residual", "", "", "", fmt(std::fabs(H - mt)), ""});
      o.csv->row({"main_term_s0", "", "", fmt(in.Y), fmt(ms), ""});
      o.csv->row({"residual_s0", "", "", "", fmt(std::fabs(H - ms)), ""});
    } catch (const CoverageError& e) {
      m = {{"unavailable", e.what()}};
    }
    r["main_term"] = m;
  }
  o.doc["result"] = r;
  return o;
}

Output cmd_shifted(const RunConfig& c) {
  const TensorCoefficients T = load_tensor(c);
  const Window win = parse_window(c.window);
  Output o;
  o.csv.emplace(std::vector<std::string>{"Y", "q", "S", "S_normalized", "terms", "gamma_max", "negative_arguments"});
  json grid = json::array();
  for (double Y : c.Y_list) {
    for (i64 q : c.q_list) {
      const ShiftedSumResult r = shifted_sum(ShiftedSumSpec{&T, q, Y, win});
      grid.push_back({{"Y", Y},
                      {"q", q},
                      {"S", r.S},
                      {"S_normalized", r.S_normalized},
                      {"terms", r.terms},
                      {"gamma_max", r.gamma_max},
                      {"negative_arguments", r.negative_arguments}});
      o.csv->row({fmt(Y), fmt(q), fmt(r.S), fmt(r.S_normalized), fmt(static_cast<i64>(r.terms)),
                  fmt(static_cast<i64>(r.gamma_max)), r.negative_arguments ? "1" : "0"});
    }
  }
  json res{{"tensor", T.label()}, {"window", window_name(win)}, {"window_mass", window_mass(win)}, {"grid", grid}};
  if (c.fit) {
    const ExponentFit f = exponent_fit(T, c.q_list, c.Y_list, win);
    res["fit"] = {{"slope_Y", f.slope_Y},
                  {"residual_Y", f.residual_Y},
                  {"slope_q", f.slope_q},
                  {"residual_q", f.residual_q},
                  {"bound_slope_Y", f.bound_slope_Y},
                  {"bound_slope_q", f.bound_slope_q},
                  {"bound_slope_Y_unnormalized", f.bound_slope_Y_unnormalized},
                  {"doubling_median", f.doubling_median}};
  }
  o.doc["result"] = res;
  return o;
}

Output cmd_whittaker(const RunConfig& c) {
  if (!(c.ymin > 0.0) || !(c.ymax > c.ymin) || c.points < 2) throw DomainError("whittaker: need 0 < ymin < ymax, points >= 2");
  const cplx nu(c.nu_re, c.nu_im);
  Output o;
  o.csv.emplace(std::vector<std::string>{"y", "value"});
  json rows = json::array();
  for (int i = 0; i < c.points; ++i) {
    double y = c.ymin * std::pow(c.ymax / c.ymin, static_cast<double>(i) / (c.points - 1));
    if (i == 0) y = c.ymin;
    if (i == c.points - 1) y = c.ymax;
    const double v = c.have_p ? whittaker_classical(c.whittaker_p, nu, y) : whittaker_normalized(c.whittaker_q, nu, y);
    rows.push_back({y, v});
    o.csv->row({fmt(y), fmt(v)});
  }
  o.doc["result"] = {{"normalized", !c.have_p}, {"values", rows}};
  return o;
}

// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  bool ok;
  std::string detail;
};

std::vector<Check> selftest_checks() {
  std::vector<Check> out;
  auto add = [&](const std::string& n, bool ok, const std::string& d) { out.push_back({n, ok, d}); };

  int bad = 0, total = 0;
  for (i64 D = -3; D >= -100; --D) {
    if (!is_fundamental_discriminant(D)) continue;
    for (i64 c = 1; c <= 4; ++c) {
      ++total;
      if (dedekind_class_number(D, c) != FormClassGroup(D, c).class_number()) ++bad;
    }
  }
  add("class_numbers", bad == 0, std::to_string(total - bad) + "/" + std::to_string(total));

  bad = 0;
  for (i64 D : {-23, -47, -71}) {
    const FormClassGroup G(D, 3);
    const auto chars = characters(G);
    for (int a = 0; a < G.class_number(); ++a) {
      cplx s = 0.0;
      for (const auto& om : chars) s += om.value(a);
      const double expect = a == G.identity() ? static_cast<double>(G.class_number()) : 0.0;
      if (std::abs(s - expect) > 1e-9) ++bad;
    }
  }
  add("orthogonality", bad == 0, std::to_string(bad) + " failures");

  const double l = dirichlet_L(QuadraticCharacter(-23), 1.0);
  const double cnf = 2.0 * M_PI * 3.0 / (2.0 * std::sqrt(23.0));
  add("class_number_formula", std::fabs(l - cnf) < 1e-9, format_double(std::fabs(l - cnf)));

  const auto fast = ramanujan_tau_table(300);
  const auto slow = ramanujan_tau_naive(300);
  add("tau_table", fast == slow, "n <= 300");

  const WeierstrassModel e11{0, -1, 1, -10, -20};
  bad = 0;
  for (u64 p : {1009ULL, 2003ULL, 5003ULL, 10007ULL})
    if (elliptic_ap(e11, p) != elliptic_ap_naive(e11, p)) ++bad;
  add("elliptic_ap", bad == 0, std::to_string(bad) + " mismatches");

  const CutoffFunction V1(ArchFactor::rankin_selberg({5.5}), TestFunction{1, 0.0});
  add("cutoff_small_y", std::fabs(V1.direct(1e-4) - 1.0) < 5e-3, format_double(V1.direct(1e-4)));

  const double w1 = whittaker_classical(0.0, cplx(0.5, 0.0), 1.0);
  add("whittaker_closed_form", std::fabs(w1 - std::exp(-0.5)) < 1e-10, format_double(w1));

  const EigenSystem d = delta_eigensystem(60000);
  const TensorCoefficients T({d});
  const ShiftedSumSpec spec{&T, 3, 1e4, Window::Compact};
  const double a = shifted_sum(spec).S, b = shifted_sum_naive(spec).S;
  add("shifted_symmetry", std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)), format_double(std::fabs(a - b)));

  const FormClassGroup G(-23, 1);
  const auto chars = characters(G);
  const RankinSetup st = make_setup(T, G, chars.front());
  CentralOptions o1, o2;
  o2.test_a = 0.25;
  const double v1 = central_value(st, o1).value, v2 = central_value(st, o2).value;
  add("test_function_independence", std::fabs(v1 - v2) <= 1e-6 * std::max(1.0, std::fabs(v1)),
      format_double(std::fabs(v1 - v2)));

  MomentOptions mo;
  mo.k = st.k;
  const MomentReport rep = average_both(T, G, mo);
  add("route_equality", rep.route_gap <= 1e-6 * std::max(1.0, std::fabs(rep.H_A)), format_double(rep.route_gap));
  return out;
}

// ---------------------------------------------------------------------------

int emit(const RunConfig& c, Output& o, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!c.output.empty()) {
    file.open(c.output, std::ios::binary);
    if (!file) {
      err << "error: cannot open " << c.output << "\n";
      return kExitDomain;
    }
    os = &file;
  }
  const json prov = provenance(c);
  if (c.format == "csv") {
    if (!o.csv) {
      err << "error: no CSV form for this subcommand\n";
      return kExitUsage;
    }
    o.csv->write(*os, prov);
  } else {
    o.doc["provenance"] = prov;
    *os << o.doc.dump(2) << "\n";
  }
  return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------

EigenSystem load_form(const std::string& spec, u64 p_max) {
  if (spec == "delta") return delta_eigensystem(p_max);
  if (spec == "11a") return elliptic_eigensystem({0, -1, 1, -10, -20}, p_max, 11, 1, "11a");
  if (spec == "37a") return elliptic_eigensystem({0, 0, 1, -1, 0}, p_max, 37, -1, "37a");
  if (spec.rfind("curve:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(spec.substr(6));
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.empty() || parts.size() > 3) throw DomainError("curve spec: curve:a1,a2,a3,a4,a6[:level[:sign]]");
    WeierstrassModel a{};
    std::stringstream cs(parts[0]);
    std::string item;
    size_t n = 0;
    while (std::getline(cs, item, ',')) {
      if (n >= 5) throw DomainError("curve spec: expected five coefficients");
      i64 v = 0;
      const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
      if (ec != std::errc() || ptr != item.data() + item.size()) throw DomainError("curve spec: bad coefficient '" + item + "'");
      a[n++] = v;
    }
    if (n != 5) throw DomainError("curve spec: expected five coefficients");
    i64 level = 0;
    int sign = 0;
    try {
      if (parts.size() > 1) level = std::stoll(parts[1]);
      if (parts.size() > 2) sign = std::stoi(parts[2]);
    } catch (const std::exception&) {
      throw DomainError("curve spec: bad level or sign");
    }
    return elliptic_eigensystem(a, p_max, level, sign, "curve[" + parts[0] + "]");
  }
  return load_eigensystem(spec);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Rankin-Selberg moments over ring class characters", "rsm"};
  app.set_version_flag("--version", std::string(RSM_VERSION));
  app.set_config("--config", "", "key = value configuration file; command-line flags override it");
  app.require_subcommand(1);
  app.add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", c.output, "output path (default stdout)");

  auto add_form = [&](CLI::App* s) {
    s->add_option("--form", c.forms, "delta | 11a | 37a | curve:a1,a2,a3,a4,a6[:level[:sign]] | table path (repeat for N factors)");
    s->add_option("--pmax", c.pmax, "prime coverage of every factor (0: per-form default)");
  };
  auto add_order = [&](CLI::App* s) {
    s->add_option("--disc", c.disc, "fundamental discriminant D_K < 0");
    s->add_option("--conductor", c.conductor, "order conductor c")->check(CLI::PositiveNumber);
  };
  auto add_afe = [&](CLI::App* s) {
    s->add_option("--k", c.k, "parity override (0 or 1); default from the root number")->check(CLI::Range(-1, 1));
    s->add_option("--basechange", c.basechange, "conductor of the basechange (default level^2)");
    s->add_option("--A", c.A, "cutoff multiplier A in n <= A (log Y + B) Y");
    s->add_option("--B", c.B, "cutoff offset B");
    s->add_option("--test-a", c.test_a, "Gaussian parameter a of the test function");
  };

  auto* cg = app.add_subcommand("classgroup", "class group, reduced forms and characters");
  add_order(cg);
  auto* ce = app.add_subcommand("central", "central values by the approximate functional equation");
  add_form(ce);
  add_order(ce);
  add_afe(ce);
  ce->add_option("--tolerance", c.tolerance, "tail tolerance");
  ce->add_option("--balance", c.balance, "balance parameter X");
  ce->add_option("--character", c.character, "character index (default all)");
  auto* av = app.add_subcommand("average", "harmonic average over ring class characters");
  add_form(av);
  add_order(av);
  add_afe(av);
  av->add_option("--route", c.route, "a | b | both")->check(CLI::IsMember({"a", "b", "both"}));
  av->add_option("--ordering", c.ordering, "divisor chain for route b");
  av->add_flag("!--no-main-term", c.main_term, "skip the main-term prediction");
  auto* sh = app.add_subcommand("shifted", "shifted convolution sums over gamma^2 + q");
  add_form(sh);
  sh->add_option("--q", c.q_list, "shifts");
  sh->add_option("--Y", c.Y_list, "scales");
  sh->add_option("--window", c.window, "compact | gaussian")->check(CLI::IsMember({"compact", "gaussian"}));
  sh->add_flag("--fit", c.fit, "fit decay exponents over the grid");
  auto* wh = app.add_subcommand("whittaker", "Whittaker function samples on a log grid");
  wh->add_option("--q", c.whittaker_q, "normalized index q (p = q/2)");
  auto* popt = wh->add_option("--p", c.whittaker_p, "classical index p (selects the unnormalized function)");
  wh->add_option("--nu", c.nu_re, "real part of nu");
  wh->add_option("--nu-imag", c.nu_im, "imaginary part of nu");
  wh->add_option("--ymin", c.ymin, "smallest y");
  wh->add_option("--ymax", c.ymax, "largest y");
  wh->add_option("--points", c.points, "number of samples");
  auto* st = app.add_subcommand("selftest", "run the invariant suite");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << RSM_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  c.have_p = popt->count() > 0;
  for (auto* s : {cg, ce, av, sh, wh, st})
    if (s->parsed()) c.subcommand = s->get_name();

  try {
    set_thread_count(c.threads);
    if (c.subcommand == "selftest") {
      const auto checks = selftest_checks();
      bool ok = true;
      for (const auto& ch : checks) {
        out << (ch.ok ? "PASS " : "FAIL ") << ch.name << " (" << ch.detail << ")\n";
        ok = ok && ch.ok;
      }
      return ok ? kExitOk : kExitSelftestFailed;
    }
    Output o;
    if (c.subcommand == "classgroup")
      o = cmd_classgroup(c);
    else if (c.subcommand == "central")
      o = cmd_central(c);
    else if (c.subcommand == "average")
      o = cmd_average(c);
    else if (c.subcommand == "shifted")
      o = cmd_shifted(c);
    else
      o = cmd_whittaker(c);
    return emit(c, o, out, err);
  } catch (const CoverageError& e) {
    err << "coverage error: " << e.what() << "\n";
    return kExitCoverage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const StateError& e) {
    err << "state error: " << e.what() << "\n";
    return kExitDomain;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace rsm
