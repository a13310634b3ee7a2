#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "qtj/errors.hpp"

using qtj::cli::Json;

namespace {

int fail(const std::string& kind, const std::string& message, int code) {
  std::cout << qtj::cli::error_object(kind, message).dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic approximants of j-invariants over F_q[T]"};
  app.require_subcommand(1, 1);

  std::string config_path;
  qtj::cli::Overrides ov;
  std::optional<long long> precision, floor;
  std::optional<int> m_cutoff, n_max, N, l, deg_bound, parallel;
  std::optional<std::string> format, out;

  const std::vector<std::pair<std::string, std::string>> verbs = {
      {"solve", "unit f, conjugate, sqrt(D) and the Binet table"},
      {"lattice", "generators of Lambda_eps(f) and the exhaustive-search check"},
      {"approx", "j_eps(f) along eps = q^-(Nd+l)"},
      {"limits", "the d limit values with convergence traces"},
      {"general", "sandwich, cosets and value clusters for h = (x+yf)/z"},
      {"selftest", "built-in consistency checks"}};
  for (const auto& [name, help] : verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--precision", precision, "j wanted down to T^-P");
    sub->add_option("--m-cutoff", m_cutoff, "tuple cutoff for the limit sums");
    sub->add_option("--n-max", n_max, "largest N (Binet rows for solve)");
    sub->add_option("--format", format, "json or csv");
    sub->add_option("--out", out, "output path, - for stdout");
    sub->add_option("--parallel", parallel, "worker threads");
    sub->add_option("--N", N, "lattice: N");
    sub->add_option("--l", l, "lattice: l");
    sub->add_option("--deg-bound", deg_bound, "exhaustive search degree bound");
    sub->add_option("--floor", floor, "comparison floor for distinctness and clusters");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("config", e.what(), 2);
  }
  const std::string verb = app.get_subcommands().front()->get_name();

  ov.precision = precision;
  ov.m_cutoff = m_cutoff;
  ov.n_max = n_max;
  ov.N = N;
  ov.l = l;
  ov.deg_bound = deg_bound;
  ov.comparison_floor = floor;
  ov.format = format;
  ov.out = out;
  ov.parallel = parallel;

  Json partial;
  qtj::cli::RunConfig cfg;
  try {
    if (config_path.empty()) {
      if (verb != "selftest") return fail("config", "--config is required for " + verb, 2);
      cfg = qtj::cli::parse_config(Json{{"field", {{"p", 2}}}});
    } else {
      std::ifstream in(config_path);
      if (!in) return fail("config", "cannot read " + config_path, 2);
      cfg = qtj::cli::parse_config(Json::parse(in));
    }
    qtj::cli::apply(cfg, ov);

    const Json result = qtj::cli::run_verb(verb, cfg, &partial);
    const std::string text = cfg.format == "csv" ? qtj::cli::to_csv(verb, result) : result.dump(2) + "\n";
    if (cfg.out == "-") {
      std::cout << text;
    } else {
      std::ofstream os(cfg.out, std::ios::binary | std::ios::trunc);
      if (!os) return fail("config", "cannot write " + cfg.out, 2);
      os << text;
    }
    return 0;
  } catch (const Json::exception& e) {
    return fail("config", e.what(), 2);
  } catch (const qtj::ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const qtj::PrecisionError& e) {
    return fail("precision", e.what(), 3);
  } catch (const qtj::InvariantViolation& e) {
    Json err = qtj::cli::error_object("invariant", e.what());
    if (!partial.is_null()) err["report"] = partial;
    std::cout << err.dump(2) << "\n";
    return 4;
  }
}
