// Command-line frontend: kickback, qpe, resources, heisenberg, shor.
//
// Every subcommand prints a run record. With --json the record is a single
// JSON document {command, parameters, seed, artifact_version, wall_time_ms,
// results}; re-running with identical parameters and seed reproduces the
// results payload bit for bit (wall_time_ms is the one timing field).
// Exit codes: 0 success, 1 declared failure results, 2 usage errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "phasekick/heisenberg.hpp"
#include "phasekick/kickback.hpp"
#include "phasekick/qpe.hpp"
#include "phasekick/resource.hpp"
#include "phasekick/serialize.hpp"
#include "phasekick/shor.hpp"

using nlohmann::json;
using namespace phasekick;

namespace {

std::string resolve_output_path(const std::string& path) {
  const char* dir = std::getenv("PHASEKICK_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(dir) / p).string();
}

void write_file(const std::string& path, const std::string& content) {
  const std::string resolved = resolve_output_path(path);
  std::ofstream out(resolved);
  if (!out) throw std::runtime_error("cannot write " + resolved);
  out << content;
}

struct RunPrinter {
  std::string command;
  json parameters = json::object();
  std::uint64_t seed = 0;
  bool as_json = false;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  void emit(const json& results) const {
    if (!as_json) return;
    const double ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - start)
            .count();
    json record;
    record["command"] = command;
    record["parameters"] = parameters;
    record["seed"] = seed;
    record["artifact_version"] = kVersion;
    record["wall_time_ms"] = ms;
    record["results"] = results;
    std::cout << record.dump(2) << "\n";
  }
};

json counts_to_json(const GateCountReport& r) {
  return json{{"n1", r.n1}, {"n2", r.n2}, {"rejected", r.rejected}};
}

double cos2pi(double x) {
  const double c = std::cos(kPi * x);
  return c * c;
}

Circuit diagonal_unitary(double phi, double theta) {
  Matrix u = Matrix::Zero(2, 2);
  u(0, 0) = std::polar(1.0, kTwoPi * phi);
  u(1, 1) = std::polar(1.0, kTwoPi * theta);
  Circuit c(1, "diag-u");
  c.add(gates::unitary(u, {0}));
  return c;
}

Circuit x_on_zero() {
  Circuit w(1, "prep");
  w.add(gates::x(0));
  return w;
}

void require_unit_phase(double value, const std::string& name) {
  if (value < 0.0 || value >= 1.0)
    throw CLI::ValidationError(name + " must lie in [0, 1)");
}

// ---------------------------------------------------------------------------

int run_kickback_cmd(double theta, double phi, const std::string& variant,
                     const std::string& emit_circuit, RunPrinter& printer) {
  require_unit_phase(theta, "--theta");
  require_unit_phase(phi, "--phi");
  KickbackSpec spec(1, x_on_zero(), diagonal_unitary(phi, theta));
  spec.reference_phase = phi;
  spec.variant = variant == "standard" ? KickbackVariant::standard
                                       : KickbackVariant::uncontrolled;
  const KickbackResult r = run_kickback(spec);
  const double predicted = spec.variant == KickbackVariant::standard
                               ? cos2pi(theta)
                               : cos2pi(theta - phi);
  if (!emit_circuit.empty()) {
    const Circuit c = spec.variant == KickbackVariant::standard
                          ? build_standard_kickback(spec)
                          : build_uncontrolled_kickback(spec);
    write_file(emit_circuit, circuit_to_json_string(c, 2));
  }

  json results;
  results["variant"] = variant;
  results["ancilla_p0"] = r.ancilla_p0;
  results["system_purity"] = r.system_purity;
  results["system_fidelity_with_psi"] = r.system_fidelity_with_psi;
  results["predicted_p0"] = predicted;
  results["abs_error"] = std::abs(r.ancilla_p0 - predicted);

  if (printer.as_json) {
    printer.emit(results);
  } else {
    std::printf("variant:                 %s\n", variant.c_str());
    std::printf("P(ancilla=0):            %s\n",
                format_double(r.ancilla_p0).c_str());
    std::printf("predicted:               %s\n",
                format_double(predicted).c_str());
    std::printf("|measured - predicted|:  %.3e\n",
                std::abs(r.ancilla_p0 - predicted));
    std::printf("system purity:           %s\n",
                format_double(r.system_purity).c_str());
    std::printf("fidelity with psi:       %s\n",
                format_double(r.system_fidelity_with_psi).c_str());
  }
  return 0;
}

int run_qpe_cmd(int bits, double theta, double phi,
                const std::vector<double>& deltas, bool compare_standard,
                const std::string& csv_path, const std::string& emit_circuit,
                RunPrinter& printer) {
  require_unit_phase(theta, "--theta");
  require_unit_phase(phi, "--phi");
  if (bits < 1 || bits > 12)
    throw CLI::ValidationError("--bits must lie in [1, 12]");

  QpeSpec spec(bits, 1, x_on_zero(), diagonal_unitary(phi, theta));
  spec.reference_phase = phi;
  spec.true_delta = wrap_unit(theta - phi);

  if (!emit_circuit.empty())
    write_file(emit_circuit,
               circuit_to_json_string(build_uncontrolled_qpe(spec), 2));

  json results;
  const PhaseEstimate est = estimate_phase(spec);
  results["distribution"] = est.distribution;
  results["map_outcome"] = est.map_outcome;
  results["map_fraction"] = est.map_fraction;
  results["success_probability"] = *est.success_probability;
  if (compare_standard) {
    const PhaseEstimate ref = estimate_phase(spec, QpeVariant::standard);
    double tvd = 0.0;
    for (std::size_t i = 0; i < ref.distribution.size(); ++i)
      tvd += std::abs(ref.distribution[i] - est.distribution[i]);
    results["tvd_vs_standard"] = 0.5 * tvd;
  }

  if (!deltas.empty()) {
    const double grid = double(std::uint64_t(1) << bits);
    const double dval = wrap_unit(theta - phi) * grid;
    if (std::abs(dval - std::round(dval)) > 1e-9 ||
        std::abs(phi * grid - std::round(phi * grid)) > 1e-9)
      throw CLI::ValidationError(
          "--delta requires --theta and --phi on the 2^bits grid");
    const StateVector perp = StateVector::basis_state(1, 0);
    const auto unc = eigenstate_error_sweep(spec, perp, deltas);
    const auto std_ =
        eigenstate_error_sweep(spec, perp, deltas, QpeVariant::standard);
    json sweep = json::array();
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      sweep.push_back(
          {{"delta", deltas[i]},
           {"uncontrolled", unc[i].success_probability},
           {"standard", std_[i].success_probability},
           {"standard_analytic", 1.0 / (1.0 + deltas[i] * deltas[i])}});
    }
    results["error_sweep"] = sweep;
    if (!csv_path.empty()) write_file(csv_path, sweep_to_csv(unc));
  }

  if (printer.as_json) {
    printer.emit(results);
  } else {
    std::printf("outcome distribution (%d bits):\n", bits);
    for (std::size_t y = 0; y < est.distribution.size(); ++y)
      if (est.distribution[y] > 1e-12)
        std::printf("  %3zu  %s\n", y,
                    format_double(est.distribution[y]).c_str());
    std::printf("map outcome:   %llu  (fraction %s)\n",
                static_cast<unsigned long long>(est.map_outcome),
                format_double(est.map_fraction).c_str());
    std::printf("success:       %s\n",
                format_double(*est.success_probability).c_str());
    if (results.contains("tvd_vs_standard"))
      std::printf("tvd vs standard: %.3e\n",
                  results["tvd_vs_standard"].get<double>());
    if (results.contains("error_sweep")) {
      std::printf("delta  uncontrolled  standard  1/(1+d^2)\n");
      for (const json& row : results["error_sweep"])
        std::printf(
            "%5s  %12s  %8s  %9s\n",
            format_double(row["delta"].get<double>()).c_str(),
            format_double(row["uncontrolled"].get<double>()).c_str(),
            format_double(row["standard"].get<double>()).c_str(),
            format_double(row["standard_analytic"].get<double>()).c_str());
    }
  }
  return 0;
}

int run_resources_cmd(const std::string& m_range, long long n1u, long long n2u,
                      long long n1w, long long n2w, const std::string& csv_path,
                      RunPrinter& printer) {
  const auto colon = m_range.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("--m-range must look like LO:HI");
  int m_lo = 0, m_hi = 0;
  try {
    m_lo = std::stoi(m_range.substr(0, colon));
    m_hi = std::stoi(m_range.substr(colon + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--m-range must look like LO:HI");
  }
  CostProfile base;
  base.n1_u = n1u;
  base.n2_u = n2u;
  base.n1_w = n1w;
  base.n2_w = n2w;
  const auto rows = cost_table(base, m_lo, m_hi);
  const std::string csv = cost_table_csv(rows);
  if (!csv_path.empty() && csv_path != "-") write_file(csv_path, csv);

  json results;
  json jrows = json::array();
  for (const CostRow& r : rows) {
    jrows.push_back({{"m", r.bits},
                     {"cost_standard", r.cost_standard},
                     {"cost_uncontrolled", r.cost_uncontrolled},
                     {"ratio", r.ratio.value()},
                     {"ratio_num", r.ratio.num},
                     {"ratio_den", r.ratio.den}});
  }
  results["rows"] = jrows;

  if (printer.as_json)
    printer.emit(results);
  else
    std::fputs(csv.c_str(), stdout);
  return 0;
}

int run_heisenberg_cmd(const heisenberg::HeisenbergSpec& spec,
                       RunPrinter& printer) {
  const heisenberg::EnergyEstimate est =
      heisenberg::estimate_ground_energy(spec);

  json results;
  results["energy"] = est.energy;
  results["exact_ground_energy"] = est.exact_ground_energy;
  results["abs_error"] = std::abs(est.energy - est.exact_ground_energy);
  results["grid_step_energy"] = est.grid_step_energy;
  results["evolution_time"] = est.evolution_time;
  results["reference_phase"] = est.reference_phase;
  results["map_outcome"] = est.phase.map_outcome;
  results["map_fraction"] = est.phase.map_fraction;
  if (est.phase.success_probability)
    results["success_probability"] = *est.phase.success_probability;
  results["distribution"] = est.phase.distribution;
  results["unitary_counts"] = counts_to_json(est.unitary_counts);
  results["prep_counts"] = counts_to_json(est.prep_counts);
  results["cost_standard"] = est.cost_standard;
  results["cost_uncontrolled"] = est.cost_uncontrolled;
  if (est.trotter_error) results["trotter_error"] = *est.trotter_error;
  if (est.candidate_eigen_residual)
    results["candidate_eigen_residual"] = *est.candidate_eigen_residual;

  if (printer.as_json) {
    printer.emit(results);
  } else {
    std::printf("estimated energy:     %s\n",
                format_double(est.energy).c_str());
    std::printf("exact ground energy:  %s\n",
                format_double(est.exact_ground_energy).c_str());
    std::printf("grid step:            %s\n",
                format_double(est.grid_step_energy).c_str());
    std::printf("evolution time:       %s\n",
                format_double(est.evolution_time).c_str());
    std::printf("map outcome:          %llu\n",
                static_cast<unsigned long long>(est.phase.map_outcome));
    std::printf("gate counts:          U n1=%lld n2=%lld  W n1=%lld n2=%lld\n",
                est.unitary_counts.n1, est.unitary_counts.n2,
                est.prep_counts.n1, est.prep_counts.n2);
    std::printf("two-qubit cost:       controlled-U %lld  uncontrolled %lld\n",
                est.cost_standard, est.cost_uncontrolled);
    if (est.trotter_error)
      std::printf("trotter error:        %.3e\n", *est.trotter_error);
  }
  return 0;
}

heisenberg::HeisenbergSpec heisenberg_spec_from_json(const json& j) {
  heisenberg::HeisenbergSpec spec;
  spec.sites = j.at("N").get<int>();
  spec.coupling = j.value("J", 1.0);
  if (j.contains("t") && !j.at("t").is_null())
    spec.time = j.at("t").get<double>();
  spec.bits = j.value("m", 8);
  const std::string evolution = j.value("evolution", std::string("exact"));
  if (evolution == "exact")
    spec.evolution = heisenberg::EvolutionMode::exact_dense;
  else if (evolution == "trotter")
    spec.evolution = heisenberg::EvolutionMode::trotter;
  else
    throw std::invalid_argument("evolution must be exact or trotter");
  spec.trotter_steps = j.value("steps", 1);
  const std::string candidate = j.value("candidate", std::string("exact"));
  if (candidate == "exact") {
    spec.candidate = heisenberg::CandidateKind::exact_ground;
  } else if (candidate.rfind("basis:", 0) == 0) {
    spec.candidate = heisenberg::CandidateKind::basis;
    const std::string bits = candidate.substr(6);
    if (bits.size() != std::size_t(spec.sites))
      throw std::invalid_argument("basis bitstring must list all qubits");
    std::uint64_t idx = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
      if (bits[q] == '1')
        idx |= std::uint64_t(1) << q;  // leftmost character is qubit 0
      else if (bits[q] != '0')
        throw std::invalid_argument("basis bitstring must be 0s and 1s");
    }
    spec.candidate_basis = idx;
  } else {
    throw std::invalid_argument("candidate must be exact or basis:<bits>");
  }
  return spec;
}

int run_shor_cmd(const shor::OrderFindingSpec& spec, int runs,
                 RunPrinter& printer) {
  const shor::OrderResult res = shor::find_order(spec, runs);

  json results;
  results["found"] = res.found;
  results["order"] = res.order;
  results["runs_used"] = res.runs_used;
  results["controlled_block_count"] = res.controlled_block_count;
  json hist = json::object();
  for (const auto& [outcome, count] : res.histogram)
    hist[std::to_string(outcome)] = count;
  results["outcome_histogram"] = hist;
  results["candidates"] = res.candidates;

  if (printer.as_json) {
    printer.emit(results);
  } else {
    if (res.found)
      std::printf("order: %lld  (runs used %d)\n", res.order, res.runs_used);
    else
      std::printf("no validated order after %d runs\n", res.runs_used);
    std::printf("controlled multiplication blocks: %d\n",
                res.controlled_block_count);
    std::printf("outcomes:");
    for (const auto& [outcome, count] : res.histogram)
      std::printf("  %llu x%lld", static_cast<unsigned long long>(outcome),
                  count);
    std::printf("\n");
  }
  return res.found ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "phasekick: phase readout through controlled state preparation.\n"
      "Exact statevector experiments for ancilla-based phase estimation and\n"
      "the matching two-qubit-gate cost model."};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool as_json = false;
  app.add_option("--seed", seed, "RNG seed (echoed in every record)")
      ->capture_default_str();
  app.add_flag("--json", as_json, "emit a machine-readable run record");

  // kickback -----------------------------------------------------------------
  auto* kick = app.add_subcommand(
      "kickback", "single-ancilla phase readout of a diagonal unitary");
  double k_theta = 0.0, k_phi = 0.0;
  std::string k_variant = "uncontrolled";
  std::string k_emit;
  kick->add_option("--theta", k_theta, "target eigenphase in [0,1)")
      ->required();
  kick->add_option("--phi", k_phi, "reference eigenphase in [0,1)")
      ->capture_default_str();
  kick->add_option("--variant", k_variant, "standard | uncontrolled")
      ->check(CLI::IsMember({"standard", "uncontrolled"}))
      ->capture_default_str();
  kick->add_option("--emit-circuit", k_emit, "write the built circuit (JSON)");

  // qpe ------------------------------------------------------------------------
  auto* qpe = app.add_subcommand("qpe",
                                 "m-bit phase estimation of a diagonal unitary");
  int q_bits = 3;
  double q_theta = 0.0, q_phi = 0.0;
  std::vector<double> q_deltas;
  bool q_compare = false;
  std::string q_csv, q_emit;
  qpe->add_option("--bits", q_bits, "phase register size (1..12)")->required();
  qpe->add_option("--theta", q_theta, "target eigenphase in [0,1)")
      ->required();
  qpe->add_option("--phi", q_phi, "reference eigenphase in [0,1)")
      ->capture_default_str();
  qpe->add_option("--delta", q_deltas,
                  "preparation-error amplitude(s); runs the error sweep");
  qpe->add_flag("--compare-standard", q_compare,
                "also run the controlled-unitary pipeline and report the TVD");
  qpe->add_option("--csv", q_csv, "write the error sweep as CSV");
  qpe->add_option("--emit-circuit", q_emit, "write the built circuit (JSON)");

  // resources ------------------------------------------------------------------
  auto* res = app.add_subcommand(
      "resources", "two-qubit gate cost table over a range of register sizes");
  std::string r_range = "1:12";
  long long r_n1u = 1, r_n2u = 0, r_n1w = 1, r_n2w = 0;
  std::string r_csv;
  res->add_option("--m-range", r_range, "bit range LO:HI")
      ->capture_default_str();
  res->add_option("--n1u", r_n1u, "single-qubit gates in U")
      ->capture_default_str();
  res->add_option("--n2u", r_n2u, "two-qubit gates in U")
      ->capture_default_str();
  res->add_option("--n1w", r_n1w, "single-qubit gates in W")
      ->capture_default_str();
  res->add_option("--n2w", r_n2w, "two-qubit gates in W")
      ->capture_default_str();
  res->add_option("--csv", r_csv, "write the table to a file ('-' = stdout)");

  // heisenberg -------------------------------------------------------------------
  auto* heis = app.add_subcommand(
      "heisenberg", "spin-chain ground energy via uncontrolled estimation");
  std::string h_descriptor;
  int h_sites = 2;
  double h_coupling = 1.0;
  double h_time = 0.0;
  int h_bits = 8;
  std::string h_evolution = "exact";
  int h_steps = 1;
  std::string h_candidate = "exact";
  heis->add_option("--descriptor", h_descriptor,
                   "experiment descriptor JSON file");
  heis->add_option("--N", h_sites, "chain length (2..10)")
      ->capture_default_str();
  heis->add_option("--J", h_coupling, "coupling strength")
      ->capture_default_str();
  auto* h_t_opt = heis->add_option(
      "--t", h_time, "evolution time (default keeps the window injective)");
  heis->add_option("--m", h_bits, "phase register size")->capture_default_str();
  heis->add_option("--evolution", h_evolution, "exact | trotter")
      ->check(CLI::IsMember({"exact", "trotter"}))
      ->capture_default_str();
  heis->add_option("--steps", h_steps, "product-formula steps")
      ->capture_default_str();
  heis->add_option("--candidate", h_candidate,
                   "exact | basis:<bits> (leftmost bit is qubit 0)")
      ->capture_default_str();

  // shor ---------------------------------------------------------------------------
  auto* shor_cmd = app.add_subcommand(
      "shor", "order finding with one uncontrolled multiplication block");
  std::string s_descriptor;
  long long s_modulus = 15, s_base = 7;
  int s_bits = 3, s_runs = 16;
  shor_cmd->add_option("--descriptor", s_descriptor,
                       "experiment descriptor JSON file");
  shor_cmd->add_option("--N", s_modulus, "modulus")->capture_default_str();
  shor_cmd->add_option("--a", s_base, "base, coprime to the modulus")
      ->capture_default_str();
  shor_cmd->add_option("--m", s_bits, "phase register size")
      ->capture_default_str();
  shor_cmd->add_option("--runs", s_runs, "sampling runs")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  RunPrinter printer;
  printer.seed = seed;
  printer.as_json = as_json;

  try {
    if (kick->parsed()) {
      printer.command = "kickback";
      printer.parameters = {
          {"theta", k_theta}, {"phi", k_phi}, {"variant", k_variant}};
      return run_kickback_cmd(k_theta, k_phi, k_variant, k_emit, printer);
    }
    if (qpe->parsed()) {
      printer.command = "qpe";
      printer.parameters = {{"bits", q_bits},
                            {"theta", q_theta},
                            {"phi", q_phi},
                            {"delta", q_deltas},
                            {"compare_standard", q_compare}};
      return run_qpe_cmd(q_bits, q_theta, q_phi, q_deltas, q_compare, q_csv,
                         q_emit, printer);
    }
    if (res->parsed()) {
      printer.command = "resources";
      printer.parameters = {{"m_range", r_range},
                            {"n1u", r_n1u},
                            {"n2u", r_n2u},
                            {"n1w", r_n1w},
                            {"n2w", r_n2w}};
      return run_resources_cmd(r_range, r_n1u, r_n2u, r_n1w, r_n2w, r_csv,
                               printer);
    }
    if (heis->parsed()) {
      heisenberg::HeisenbergSpec spec;
      if (!h_descriptor.empty()) {
        std::ifstream in(h_descriptor);
        if (!in) throw std::invalid_argument("cannot read " + h_descriptor);
        json j;
        in >> j;
        spec = heisenberg_spec_from_json(j);
        printer.parameters = {{"descriptor", h_descriptor}, {"spec", j}};
      } else {
        json j = {{"N", h_sites},     {"J", h_coupling},
                  {"m", h_bits},      {"evolution", h_evolution},
                  {"steps", h_steps}, {"candidate", h_candidate}};
        if (h_t_opt->count() > 0) j["t"] = h_time;
        spec = heisenberg_spec_from_json(j);
        printer.parameters = j;
      }
      printer.command = "heisenberg";
      return run_heisenberg_cmd(spec, printer);
    }
    if (shor_cmd->parsed()) {
      shor::OrderFindingSpec spec;
      if (!s_descriptor.empty()) {
        std::ifstream in(s_descriptor);
        if (!in) throw std::invalid_argument("cannot read " + s_descriptor);
        json j;
        in >> j;
        spec.modulus = j.at("N").get<long long>();
        spec.base = j.at("a").get<long long>();
        spec.bits = j.value("m", 3);
        s_runs = j.value("runs", s_runs);
        spec.seed = j.value("seed", seed);
        printer.parameters = {{"descriptor", s_descriptor}, {"spec", j}};
      } else {
        spec.modulus = s_modulus;
        spec.base = s_base;
        spec.bits = s_bits;
        spec.seed = seed;
        printer.parameters = {
            {"N", s_modulus}, {"a", s_base}, {"m", s_bits}, {"runs", s_runs}};
      }
      printer.command = "shor";
      return run_shor_cmd(spec, s_runs, printer);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
