// cpa: command-line front end.
//
//   cpa dim --n 2 --group C:2
//   cpa compose a.json b.json --n 2 --group C:2 --delta 2/3
//   cpa verify --suite cover --n 3 --group C:2 --height 2
//   cpa homology --side wreath --n 2 --group C:2 --coeff F:2 --max-q 3
//   cpa stability --n 2 --group C:2 --coeff Z --max-q 1
//
// Exit codes: 0 all assertions passed, 1 assertion failure, 2 usage or
// configuration error, 3 budget exceeded.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpa/algebra.hpp"
#include "cpa/cover.hpp"
#include "cpa/error.hpp"
#include "cpa/group.hpp"
#include "cpa/homology.hpp"
#include "cpa/io.hpp"
#include "cpa/ring.hpp"

namespace {

using nlohmann::json;
using namespace cpa;

struct RunConfig {
  std::string command;
  std::size_t n = 2;
  std::string group = "trivial";
  std::string delta = "1";
  std::string coeff = "Q";
  std::size_t max_q = 1;
  std::optional<std::size_t> height;
  std::string suite = "algebra";
  std::string side = "algebra";
  std::string mode = "exhaustive";
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::size_t budget_mb = 4096;
  std::string out;
  std::vector<std::string> files;
  bool timing = false;

  json to_json() const {
    json j{{"command", command}, {"n", n},         {"group", group}, {"delta", delta},     {"coeff", coeff},
           {"max_q", max_q},     {"mode", mode},   {"seed", seed},   {"threads", threads}, {"budget_mb", budget_mb}};
    if (command == "verify") {
      j["suite"] = suite;
      if (suite == "cover") j["height"] = height.value_or(n - 1);
    }
    if (command == "homology") j["side"] = side;
    if (command == "compose") j["files"] = files;
    return j;
  }
};

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kBudget = 3 };

void emit(const RunConfig& cfg, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw Error(ErrorKind::BadInput, "cannot write " + cfg.out);
  f << text;
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::BadInput, "cannot read " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::BadInput, path + ": " + e.what());
  }
}

EngineLimits engine_limits(const RunConfig& cfg) {
  EngineLimits lim;
  lim.budget_bytes = cfg.budget_mb << 20;
  lim.threads = cfg.threads;
  lim.seed = cfg.seed;
  return lim;
}

int cmd_dim(const RunConfig& cfg, const FiniteGroup& g) {
  DiagramBasis basis(cfg.n, g);
  const std::size_t perms = basis.permutation_indices().size();
  emit(cfg, {{"dim", basis.size()}, {"permutation", perms}, {"ideal", basis.size() - perms}, {"config", cfg.to_json()}});
  return kPass;
}

template <class Ring>
int cmd_compose(const RunConfig& cfg, const AlgebraContext<Ring>& ctx) {
  if (cfg.files.size() != 2) throw Error(ErrorKind::BadInput, "compose takes exactly two element files");
  auto u = element_from_json(ctx, read_json_file(cfg.files[0]));
  auto v = element_from_json(ctx, read_json_file(cfg.files[1]));
  emit(cfg, element_to_json(multiply(ctx, u, v)));
  return kPass;
}

template <class Ring>
int cmd_verify(const RunConfig& cfg, const AlgebraContext<Ring>& ctx) {
  VerificationReport rep;
  rep.seed = cfg.seed;
  json details = json::object();
  if (cfg.suite == "algebra") {
    auto axioms = verify_algebra_axioms(ctx, cfg.seed);
    auto quotient = verify_quotient_homomorphism(ctx, wreath_product(ctx.group(), static_cast<int>(ctx.n())));
    details["axioms"] = axioms.details;
    rep.merge(axioms);
    rep.merge(quotient);
    rep.exhaustive = false;
  } else {
    CoverLimits lim;
    lim.seed = cfg.seed;
    if (cfg.mode == "sampled") lim.exhaustive_max_specs = 0;
    const std::size_t height = cfg.suite == "cover" ? cfg.height.value_or(cfg.n - 1) : cfg.n - 1;
    auto cover = verify_cover(ctx, height, lim);
    details["cover"] = cover.details;
    rep.merge(cover);
    if (cfg.suite == "lemmas") {
      try {
        rep.merge(verify_zero_criterion_all(ctx));
        details["zero_criterion_all"] = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::SizeLimit) throw;
        details["zero_criterion_all"] = false;
      }
    }
  }
  json j = rep.to_json();
  j["details"] = details;
  j["config"] = cfg.to_json();
  emit(cfg, j);
  return rep.passed() ? kPass : kFail;
}

template <class Ring>
int cmd_homology(const RunConfig& cfg, const AlgebraContext<Ring>& ctx) {
  const auto start = std::chrono::steady_clock::now();
  const auto lim = engine_limits(cfg);
  HomologyResult h = cfg.side == "algebra"
                         ? tor_of_algebra(ctx, cfg.max_q, lim)
                         : tor_of_group(wreath_product(ctx.group(), static_cast<int>(ctx.n())), ctx.ring(), cfg.max_q, lim);
  json j = h.to_json();
  j["side"] = cfg.side;
  j["delta"] = ctx.ring().to_string(ctx.delta());
  j["asserted_range"] = std::min(cfg.max_q, cfg.n - 1);
  j["chain_dims"] = h.chain_dims;
  if (cfg.timing)
    j["runtime_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  j["config"] = cfg.to_json();
  emit(cfg, j);
  return kPass;
}

template <class Ring>
int cmd_stability(const RunConfig& cfg, const AlgebraContext<Ring>& ctx) {
  const auto start = std::chrono::steady_clock::now();
  auto rep = compare_stability(ctx, cfg.max_q, engine_limits(cfg));
  json j = rep.to_json(ctx.ring().to_string(ctx.delta()));
  if (cfg.timing)
    j["runtime_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  j["config"] = cfg.to_json();
  emit(cfg, j);
  return rep.passed ? kPass : kFail;
}

int run(const RunConfig& cfg) {
  const FiniteGroup g = parse_group_spec(cfg.group);
  if (cfg.command == "dim") return cmd_dim(cfg, g);
  const AnyRing ring = parse_ring_spec(cfg.coeff);
  return std::visit(
      [&](const auto& r) -> int {
        using Ring = std::decay_t<decltype(r)>;
        AlgebraContext<Ring> ctx(cfg.n, g, r, r.parse(cfg.delta));
        if (cfg.command == "compose") return cmd_compose(cfg, ctx);
        if (cfg.command == "verify") return cmd_verify(cfg, ctx);
        if (cfg.command == "homology") return cmd_homology(cfg, ctx);
        return cmd_stability(cfg, ctx);
      },
      ring);
}

void check_config(const RunConfig& cfg) {
  if (cfg.n < 1) throw Error(ErrorKind::BadInput, "--n must be at least 1");
  if (cfg.n > kMaxDiagramSize) throw Error(ErrorKind::SizeLimit, "--n too large");
  if (cfg.threads < 1) throw Error(ErrorKind::BadInput, "--threads must be at least 1");
  if (cfg.command == "verify" && cfg.suite == "cover" && cfg.height && (*cfg.height < 1 || *cfg.height > cfg.n - 1))
    throw Error(ErrorKind::BadInput, "--height must lie in 1..n-1");
  if (cfg.max_q > 8) throw Error(ErrorKind::BadInput, "--max-q above 8 is not supported");
}

int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::BudgetExceeded:
      return kBudget;
    case ErrorKind::VerificationFailed:
      return kFail;
    default:
      return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"G-coloured partition algebras: diagrams, verification and homology"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto shared = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "number of nodes per side")->capture_default_str();
    sub->add_option("--group", cfg.group, "group spec: trivial, C:m, S:m, prod:A,B, table:FILE.json")
        ->capture_default_str();
    sub->add_option("--delta", cfg.delta, "loop parameter, parsed in the coefficient ring")->capture_default_str();
    sub->add_option("--coeff", cfg.coeff, "coefficient ring: Q, Z or F:p")->capture_default_str();
    sub->add_option("--max-q", cfg.max_q, "top homological degree")->capture_default_str();
    sub->add_option("--height", cfg.height, "cover height (default n-1)");
    sub->add_option("--mode", cfg.mode, "spec enumeration")
        ->check(CLI::IsMember({"exhaustive", "sampled"}))
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed for every sampled check")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads for column generation")->capture_default_str();
    sub->add_option("--budget-mb", cfg.budget_mb, "memory budget for elimination")->capture_default_str();
    sub->add_option("--out", cfg.out, "write the report here instead of stdout");
    sub->add_flag("--timing", cfg.timing, "add runtime_ms to homology reports");
  };

  auto* dim = app.add_subcommand("dim", "diagram, permutation and ideal counts");
  auto* compose = app.add_subcommand("compose", "product of two algebra elements");
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  auto* homology = app.add_subcommand("homology", "Tor of the trivial module on one side");
  auto* stability = app.add_subcommand("stability", "compare Tor of the algebra with the wreath product");
  for (auto* s : {dim, compose, verify, homology, stability}) shared(s);
  compose->add_option("files", cfg.files, "two element JSON files")->required()->expected(2);
  verify->add_option("--suite", cfg.suite)->check(CLI::IsMember({"cover", "lemmas", "algebra"}))->capture_default_str();
  homology->add_option("--side", cfg.side)->check(CLI::IsMember({"algebra", "wreath"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    check_config(cfg);
    return run(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return kBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
