#include "rebound/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "rebound/io.hpp"
#include "rebound/parallel.hpp"

namespace rebound {

std::string sha256_hex(const std::string &bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  static const char *hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

/// A required input was not supplied for the requested computation.
class MissingInput : public Error {
public:
  explicit MissingInput(const std::string &msg) : Error("MissingInput: " + msg) {}
};

std::string num(double v) { return format_number(v); }

struct Session {
  Json inputs = Json::array();

  Json load(const std::string &role, const std::string &path) {
    const std::string text = read_text_file(path);
    Json entry;
    entry["role"] = role;
    entry["path"] = path;
    entry["sha256"] = sha256_hex(text);
    inputs.push_back(std::move(entry));
    try {
      return Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
      throw ParseError("'" + path + "': " + e.what());
    }
  }
};

Json tolerance_table() {
  Json t;
  t["herm"] = num(tol::herm);
  t["trace"] = num(tol::trace);
  t["psd"] = num(tol::psd);
  t["eig_zero"] = num(tol::eig_zero);
  t["support"] = num(tol::support);
  t["num"] = num(tol::num);
  t["unitary"] = num(tol::unitary);
  t["cptp"] = num(tol::cptp);
  t["simulation"] = num(tol::simulation);
  t["covariance"] = num(tol::covariance);
  t["povm"] = num(tol::povm);
  t["type2_zero"] = num(tol::type2_zero);
  t["zero_error"] = num(tol::zero_error);
  return t;
}

void write_json(const Json &j, const std::string &path) {
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw ParseError("cannot write '" + path + "'");
  f << j.dump(2) << "\n";
  if (!f)
    throw ParseError("cannot write '" + path + "'");
}

// ---------------------------------------------------------------------------
// validate

struct Check {
  Json entries = Json::array();
  bool pass = true;

  void add(const std::string &object, const std::string &quantity, double deviation,
           double tolerance) {
    const bool ok = deviation <= tolerance;
    Json e;
    e["object"] = object;
    e["quantity"] = quantity;
    e["deviation"] = num(deviation);
    e["tolerance"] = num(tolerance);
    e["pass"] = ok;
    entries.push_back(std::move(e));
    pass = pass && ok;
  }

  void construct(const std::function<void()> &fn, Json &results) {
    try {
      fn();
      results["construct_error"] = nullptr;
    } catch (const ParseError &) {
      throw;
    } catch (const Error &e) {
      results["construct_error"] = e.what();
      pass = false;
    }
  }
};

double kraus_deviation(const std::vector<Matrix> &kraus, Eigen::Index in_dim,
                       Eigen::Index out_dim) {
  if (kraus.empty())
    return std::numeric_limits<double>::infinity();
  for (const auto &k : kraus)
    if (k.rows() != out_dim || k.cols() != in_dim)
      return std::numeric_limits<double>::infinity();
  return cptp_deviation(kraus);
}

double state_error(const Matrix &m) {
  if (m.rows() != m.cols())
    return std::numeric_limits<double>::infinity();
  const auto d = state_deviation(m);
  if (!d.finite)
    return std::numeric_limits<double>::infinity();
  return std::max({d.hermiticity, -d.min_eigenvalue, d.trace_error});
}

Json cmd_validate(Session &s, const std::string &path, const std::string &dump,
                  const std::string &collection_path, bool &pass) {
  const Json doc = s.load("document", path);
  const std::string kind = document_kind(doc);
  Json results;
  results["kind"] = kind;
  Check check;
  Eigen::Index in_dim = 0, out_dim = 0; // protocol dimensions from --collection

  if (kind == "collection") {
    const auto raw = raw_collection_from_json(doc);
    std::set<std::string> labels;
    for (const auto &c : raw.channels) {
      check.add(c.label, "cptp", kraus_deviation(c.kraus, raw.in_dim, raw.out_dim), tol::cptp);
      if (!labels.insert(c.label).second)
        check.add(c.label, "duplicate_label", 1.0, 0.0);
    }
    check.construct([&] { collection_from_json(doc); }, results);
  } else if (kind == "group") {
    const auto in = matrix_list_from_json(doc.at("unitaries_in"));
    const auto out =
        doc.contains("unitaries_out") ? matrix_list_from_json(doc["unitaries_out"]) : in;
    auto deviation = [](const Matrix &u) {
      return u.rows() == u.cols() ? unitary_deviation(u) : std::numeric_limits<double>::infinity();
    };
    for (std::size_t g = 0; g < in.size(); ++g)
      check.add("g" + std::to_string(g) + ".in", "unitarity", deviation(in[g]), tol::unitary);
    for (std::size_t g = 0; g < out.size(); ++g)
      check.add("g" + std::to_string(g) + ".out", "unitarity", deviation(out[g]), tol::unitary);
    check.construct(
        [&] {
          const auto rep = group_from_json(doc);
          results["one_design_deviation"] = num(is_one_design(rep).max_deviation);
        },
        results);
  } else if (kind == "protocol") {
    if (!collection_path.empty()) {
      const auto raw = raw_collection_from_json(s.load("collection", collection_path));
      in_dim = raw.in_dim;
      out_dim = raw.out_dim;
    }
    if (doc.contains("adaptive") && doc["adaptive"].is_array()) {
      std::size_t i = 0;
      for (const auto &a : doc["adaptive"]) {
        const auto kraus = matrix_list_from_json(a);
        ++i;
        check.add("adaptive" + std::to_string(i), "cptp",
                  kraus.empty() ? std::numeric_limits<double>::infinity() : cptp_deviation(kraus),
                  tol::cptp);
      }
    }
    check.add("initial_state", "state", state_error(matrix_from_json(doc.at("initial_state"))),
              tol::psd);
    const auto povm = matrix_list_from_json(doc.at("povm"));
    check.add("povm", "povm", povm_deviation(povm, povm.empty() ? 0 : povm.front().rows()),
              tol::povm);
    check.construct([&] { protocol_from_json(doc, in_dim, out_dim); }, results);
  } else if (kind == "state") {
    check.add("state", "state", state_error(matrix_from_json(doc.at("matrix"))), tol::psd);
    check.construct([&] { state_from_json(doc); }, results);
  } else if (kind == "env") {
    const auto &inter = doc.at("interaction");
    const auto kraus = matrix_list_from_json(inter.at("kraus"));
    check.add("interaction", "cptp",
              kraus_deviation(kraus, inter.at("in_dim").get<Eigen::Index>(),
                              inter.at("out_dim").get<Eigen::Index>()),
              tol::cptp);
    for (const auto &st : doc.at("env_states"))
      check.add(st.at("label").get<std::string>(), "state",
                state_error(matrix_from_json(st.at("matrix"))), tol::psd);
    check.construct([&] { env_from_json(doc); }, results);
  } else if (kind == "seizure") {
    const auto &seizer = doc.at("seizer");
    check.add("probe", "state", state_error(matrix_from_json(doc.at("probe").at("matrix"))),
              tol::psd);
    check.add("seizer", "cptp",
              kraus_deviation(matrix_list_from_json(seizer.at("kraus")),
                              seizer.at("in_dim").get<Eigen::Index>(),
                              seizer.at("out_dim").get<Eigen::Index>()),
              tol::cptp);
    check.construct([&] { seizure_from_json(doc); }, results);
  } else if (kind == "codebook") {
    check.construct([&] { codebook_from_json(doc); }, results);
  } else {
    throw ParseError("unknown document kind '" + kind + "'");
  }

  results["checks"] = check.entries;
  results["pass"] = check.pass;
  pass = check.pass;
  if (!dump.empty() && pass)
    write_json(canonical_document(doc, in_dim, out_dim), dump);
  return results;
}

// ---------------------------------------------------------------------------
// bounds

Json capacity_json(const CapacityReport &r, const std::string &route) {
  Json j;
  j["kind"] = to_string(r.kind);
  j["route"] = route;
  j["value"] = num(r.value);
  j["tolerance"] = num(r.tolerance);
  j["gap_certificate"] = num(r.gap_certificate);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["labels"] = r.labels;
  j["optimizer"] = number_list(r.optimizer);
  if (r.finite_blocklength) {
    const auto &d = *r.finite_blocklength;
    Json f;
    f["n"] = d.n;
    f["epsilon"] = num(d.epsilon);
    f["prior_mode"] = to_string(d.prior_mode);
    f["theta_hat_strategy"] = to_string(d.strategy);
    f["seed"] = d.seed;
    f["certified_block_bits"] = num(d.certified_block_bits);
    f["ascent_block_bits"] = num(d.ascent_block_bits);
    f["best_theta_hat"] = d.candidates[d.best].id;
    Json cands = Json::array();
    for (const auto &c : d.candidates) {
      Json e;
      e["id"] = c.id;
      e["sup_bits"] = num(c.sup_bits);
      e["ascent_bits"] = num(c.ascent_bits);
      cands.push_back(std::move(e));
    }
    f["candidates"] = std::move(cands);
    j["finite_blocklength"] = std::move(f);
  }
  return j;
}

struct BoundsOptions {
  std::string collection, env, seize, group, base_label;
  std::optional<std::size_t> n;
  std::optional<double> epsilon;
  double tol = 1e-9;
  std::string prior_mode = "general";
  std::string strategy = "mixture";
  std::vector<std::string> theta_hat;
  std::size_t grid_size = 16;
  std::size_t restarts = 20;
};

Json cmd_bounds(Session &s, const BoundsOptions &o, std::uint64_t seed) {
  const auto coll = collection_from_json(s.load("collection", o.collection));
  Json results;
  results["labels"] = coll.alphabet();
  Json bounds = Json::array();
  Json cross = Json::array();
  std::optional<EnvParametrization> finite_env;

  auto delta = [&](const std::string &a, double va, const std::string &b, double vb) {
    Json c;
    c["a"] = a;
    c["b"] = b;
    c["delta"] = num(std::abs(va - vb));
    cross.push_back(std::move(c));
  };

  if (o.group.empty() && o.env.empty())
    throw MissingInput("bounds needs --group or --env");

  if (!o.group.empty()) {
    const auto rep = group_from_json(s.load("group", o.group));
    const std::string base_label = o.base_label.empty() ? coll.alphabet().front() : o.base_label;
    const auto t2 = theorem2_capacity(coll.at(base_label), rep);
    Json j2 = capacity_json(t2, "choi_mutual_information");
    j2["base_label"] = base_label;
    bounds.push_back(std::move(j2));

    const auto tele = teleportation_simulation(coll, rep);
    const auto t1 = theorem1_upper_bound(tele.env, o.tol);
    const auto sz = seizable_capacity(coll, tele.env, tele.seizure, o.tol);
    bounds.push_back(capacity_json(t1, "teleportation_environment"));
    bounds.push_back(capacity_json(sz, "teleportation_environment"));
    delta("theorem2_equality", t2.value, "seizable_equality", sz.value);
    delta("theorem2_equality", t2.value, "theorem1_upper", t1.value);
    delta("theorem1_upper", t1.value, "seizable_equality", sz.value);
    if (o.env.empty())
      finite_env = tele.env;
  }

  if (!o.env.empty()) {
    const auto env = env_from_json(s.load("env", o.env));
    const auto param = verify_env_parametrization(coll, env);
    Json p;
    p["max_deviation"] = num(param.max_deviation);
    p["tolerance"] = num(param.tolerance);
    p["pass"] = param.pass;
    results["env_parametrization"] = std::move(p);
    if (!param.pass)
      throw NotParametrized("environment file does not simulate the collection (deviation " +
                            num(param.max_deviation) + ")");
    const auto t1 = theorem1_upper_bound(env, o.tol);
    bounds.push_back(capacity_json(t1, "environment_file"));
    if (!o.seize.empty()) {
      const auto seize = seizure_from_json(s.load("seizure", o.seize));
      const auto sz = seizable_capacity(coll, env, seize, o.tol);
      bounds.push_back(capacity_json(sz, "environment_file"));
      delta("theorem1_upper", t1.value, "seizable_equality", sz.value);
    }
    finite_env = env;
  } else if (!o.seize.empty()) {
    throw MissingInput("--seize needs --env");
  }

  if (o.n || o.epsilon) {
    FiniteBlocklengthOptions f;
    f.n = o.n.value_or(1);
    f.epsilon = o.epsilon.value_or(0.0);
    f.seed = seed;
    f.grid_size = o.grid_size;
    f.restarts = o.restarts;
    f.holevo_tol = o.tol;
    if (o.prior_mode == "iid")
      f.prior_mode = PriorMode::iid;
    else if (o.prior_mode != "general")
      throw ParseError("--prior-mode must be iid or general");
    if (o.strategy == "grid")
      f.strategy = ThetaHatStrategy::grid;
    else if (o.strategy == "supplied")
      f.strategy = ThetaHatStrategy::supplied;
    else if (o.strategy != "mixture")
      throw ParseError("--theta-hat-strategy must be mixture, grid or supplied");
    for (const auto &path : o.theta_hat)
      f.supplied.push_back(state_from_json(s.load("theta_hat", path)).matrix());
    if (f.strategy == ThetaHatStrategy::supplied && f.supplied.empty())
      throw MissingInput("--theta-hat-strategy supplied needs --theta-hat files");
    bounds.push_back(capacity_json(finite_blocklength_bound(*finite_env, f),
                                   o.env.empty() ? "teleportation_environment"
                                                 : "environment_file"));
  }

  results["bounds"] = std::move(bounds);
  results["cross_checks"] = std::move(cross);
  return results;
}

// ---------------------------------------------------------------------------
// dhe, simulate, covariance

Json cmd_dhe(Session &s, const std::string &rho_path, const std::string &sigma_path,
             double epsilon) {
  const auto rho = state_from_json(s.load("rho", rho_path));
  const auto sigma = state_from_json(s.load("sigma", sigma_path));
  const auto r = dh_epsilon(rho, sigma, epsilon);
  Json j;
  j["epsilon"] = num(epsilon);
  j["value"] = num(r.value);
  j["type1"] = num(r.test.type1);
  j["type2"] = num(r.test.type2);
  j["multiplier"] = num(r.multiplier);
  j["dual_bound"] = num(r.dual_bound);
  j["tolerance"] = num(tol::num);
  return j;
}

Json cmd_simulate(Session &s, const std::string &protocol_path, const std::string &coll_path,
                  const std::string &code_path, const std::string &env_path) {
  const auto coll = collection_from_json(s.load("collection", coll_path));
  const auto proto =
      protocol_from_json(s.load("protocol", protocol_path), coll.in_reg().dim, coll.out_reg().dim);
  const auto code = codebook_from_json(s.load("codebook", code_path));
  const auto z = zero_error_evaluate(proto, coll, code);

  Json j;
  Json msgs = Json::array();
  for (std::size_t m = 0; m < code.size(); ++m) {
    Json e;
    e["message"] = code.message(m);
    e["word"] = code.word(m);
    e["success"] = num(z.result.per_message_success[m]);
    msgs.push_back(std::move(e));
  }
  j["messages"] = std::move(msgs);
  j["avg_success"] = num(z.result.avg_success);
  j["error"] = num(z.result.error);
  j["rate"] = num(z.result.rate);
  j["zero_error"] = z.result.zero_error;
  j["min_success"] = num(z.min_success);
  j["povm_zero_error"] = z.povm_zero_error;
  j["max_pairwise_fidelity"] = num(z.max_pairwise_fidelity);
  j["orthogonal_outputs"] = z.orthogonal_outputs;
  j["tolerance"] = num(tol::zero_error);
  if (!env_path.empty()) {
    const auto env = env_from_json(s.load("env", env_path));
    const auto red = check_reduction(proto, coll, env, code);
    Json r;
    r["max_deviation"] = num(red.max_deviation);
    r["env_povm_deviation"] = num(red.povm_deviation);
    r["tolerance"] = num(1e-10);
    r["pass"] = red.max_deviation <= 1e-10;
    j["reduction"] = std::move(r);
  }
  return j;
}

Json cmd_covariance(Session &s, const std::string &coll_path, const std::string &group_path,
                    const std::string &build_label, const std::string &dump) {
  const auto coll = collection_from_json(s.load("collection", coll_path));
  const auto rep = group_from_json(s.load("group", group_path));
  Json j;
  const auto design = is_one_design(rep);
  j["one_design"] = {{"max_deviation", num(design.max_deviation)},
                     {"tolerance", num(design.tolerance)},
                     {"pass", design.pass}};
  j["twirl_choi_deviation"] = num(twirl_choi_deviation(rep));
  Json members = Json::array();
  for (std::size_t x = 0; x < coll.size(); ++x) {
    const auto cov = is_covariant(coll.channels()[x], rep);
    Json e;
    e["label"] = coll.alphabet()[x];
    e["max_deviation"] = num(cov.max_deviation);
    e["tolerance"] = num(cov.tolerance);
    e["pass"] = cov.pass;
    if (rep.table())
      e["composition_deviation"] = num(composition_deviation(coll.channels()[x], rep));
    members.push_back(std::move(e));
  }
  j["members"] = std::move(members);
  if (!build_label.empty()) {
    const auto built = build_jointly_covariant(coll.at(build_label), rep);
    j["built"] = {{"base_label", build_label}, {"labels", built.alphabet()}};
    if (!dump.empty())
      write_json(collection_to_json(built), dump);
  }
  return j;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Rebound capacity bounds and protocol simulation", "rebound"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string out_path;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool no_timing = false;
  app.add_option("--out", out_path, "Write the report to this file");
  app.add_option("--seed", seed, "Seed for randomized searches");
  app.add_option("--threads", threads, "Worker threads (overrides REBOUND_THREADS)");
  app.add_flag("--no-timing", no_timing, "Omit wall_time_ms from the report");

  std::string dump;
  std::string v_path, v_collection;
  auto *validate = app.add_subcommand("validate", "Check a document of any kind");
  validate->add_option("path", v_path)->required();
  validate->add_option("--collection", v_collection, "Collection giving protocol dimensions");
  validate->add_option("--dump", dump, "Write the canonical document to this file");

  BoundsOptions b;
  auto *bounds = app.add_subcommand("bounds", "Capacity and finite-blocklength bounds");
  bounds->add_option("collection", b.collection)->required();
  bounds->add_option("--env", b.env);
  bounds->add_option("--seize", b.seize);
  bounds->add_option("--group", b.group);
  bounds->add_option("--base-label", b.base_label);
  bounds->add_option("--n", b.n);
  bounds->add_option("--epsilon", b.epsilon);
  bounds->add_option("--tol", b.tol);
  bounds->add_option("--prior-mode", b.prior_mode);
  bounds->add_option("--theta-hat-strategy", b.strategy);
  bounds->add_option("--theta-hat", b.theta_hat);
  bounds->add_option("--grid-size", b.grid_size);
  bounds->add_option("--restarts", b.restarts);

  std::string rho_path, sigma_path;
  double epsilon = 0.0;
  auto *dhe = app.add_subcommand("dhe", "Hypothesis-testing divergence of two states");
  dhe->add_option("rho", rho_path)->required();
  dhe->add_option("sigma", sigma_path)->required();
  dhe->add_option("--epsilon", epsilon);

  std::string p_path, c_path, k_path, env_path;
  auto *simulate = app.add_subcommand("simulate", "Run a protocol on a collection");
  simulate->add_option("protocol", p_path)->required();
  simulate->add_option("collection", c_path)->required();
  simulate->add_option("codebook", k_path)->required();
  simulate->add_option("--reduce", env_path, "Environment file for the reduction check");

  auto *reduce = app.add_subcommand("reduce", "simulate with the reduction check");
  reduce->add_option("protocol", p_path)->required();
  reduce->add_option("collection", c_path)->required();
  reduce->add_option("codebook", k_path)->required();
  reduce->add_option("env", env_path)->required();

  std::string g_path, build_label;
  auto *covariance = app.add_subcommand("covariance", "Covariance and one-design checks");
  covariance->add_option("collection", c_path)->required();
  covariance->add_option("--group", g_path)->required();
  covariance->add_option("--build", build_label, "Build the jointly covariant family of this member");
  covariance->add_option("--dump", dump, "Write the built collection to this file");

  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  if (threads > 0)
    set_max_threads(threads);

  Session session;
  Json report;
  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    Json results;
    std::string command;
    if (*validate) {
      command = "validate";
      bool pass = false;
      results = cmd_validate(session, v_path, dump, v_collection, pass);
      code = pass ? 0 : 1;
    } else if (*bounds) {
      command = "bounds";
      results = cmd_bounds(session, b, seed);
    } else if (*dhe) {
      command = "dhe";
      results = cmd_dhe(session, rho_path, sigma_path, epsilon);
    } else if (*simulate || *reduce) {
      command = *simulate ? "simulate" : "reduce";
      results = cmd_simulate(session, p_path, c_path, k_path, env_path);
    } else if (*covariance) {
      command = "covariance";
      results = cmd_covariance(session, c_path, g_path, build_label, dump);
    }
    report["command"] = command;
    report["inputs"] = session.inputs;
    report["seed"] = seed;
    report["tolerances"] = tolerance_table();
    report["results"] = std::move(results);
    if (!no_timing) {
      const std::chrono::duration<double, std::milli> ms =
          std::chrono::steady_clock::now() - start;
      report["wall_time_ms"] = num(ms.count());
    }
    if (out_path.empty())
      out << report.dump(2) << "\n";
    else
      write_json(report, out_path);
  } catch (const ParseError &e) {
    err << e.what() << "\n";
    return 2;
  } catch (const MissingInput &e) {
    err << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception &e) {
    err << "ParseError: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    err << e.what() << "\n";
    return 1;
  }
  return code;
}

} // namespace rebound
