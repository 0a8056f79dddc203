// Copyright 2026 The asymgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asymgame/cli.h"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <sstream>
#include <vector>

#include "asymgame/chain_sim.h"
#include "asymgame/hj_dual.h"
#include "asymgame/hj_primal.h"
#include "asymgame/strategy.h"
#include "asymgame/variational.h"
#include "json.hpp"

namespace asymgame {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string Index(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

const Json& Field(const Json& obj, const std::string& key,
                  const std::string& source) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SpecError(source + ": missing field \"" + key + "\"");
  }
  return *it;
}

const Json& Array(const Json& j, std::size_t size, const std::string& path,
                  const std::string& source) {
  if (!j.is_array()) throw SpecError(source + ": " + path + ": expected array");
  if (size > 0 && j.size() != size) {
    throw SpecError(source + ": " + path + ": expected " +
                    std::to_string(size) + " entries, found " +
                    std::to_string(j.size()));
  }
  return j;
}

double Number(const Json& j, const std::string& path,
              const std::string& source) {
  if (!j.is_number()) {
    throw SpecError(source + ": " + path + ": expected number");
  }
  return j.get<double>();
}

// Either a positive count or a list of labels.
std::vector<std::string> Labels(const Json& j, const std::string& path,
                                const std::string& source) {
  std::vector<std::string> out;
  if (j.is_number_integer()) {
    const long long n = j.get<long long>();
    if (n < 1) throw SpecError(source + ": " + path + ": must be >= 1");
    for (long long i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
  }
  if (!j.is_array() || j.empty()) {
    throw SpecError(source + ": " + path +
                    ": expected a positive count or a non-empty list");
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) {
      throw SpecError(source + ": " + Index(path, i) + ": expected string");
    }
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

std::string Num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Eigen::VectorXd ParseBelief(const std::string& text, int k) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("--p: cannot parse \"" + item + "\"");
    }
  }
  if (static_cast<int>(values.size()) != k) {
    throw std::invalid_argument("--p: expected " + std::to_string(k) +
                                " coordinates");
  }
  Eigen::VectorXd p = Eigen::Map<Eigen::VectorXd>(values.data(), k);
  if (!IsBelief(p)) throw std::invalid_argument("--p: not a belief");
  return p;
}

Json ConvergenceJson(const ConvergenceReport& r) {
  Json j;
  j["iterations"] = r.iterations;
  j["residual"] = r.residual;
  j["apriori_bound"] = r.apriori_bound;
  j["converged"] = r.converged;
  return j;
}

// Collects output files so a failed run can remove them.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {}

  void Write(const std::string& name,
             const std::function<void(std::ostream&)>& body) {
    const fs::path path = dir_ / name;
    written_.push_back(name);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    body(os);
    if (!os) throw std::runtime_error("write failed: " + path.string());
  }

  void WriteJson(const std::string& name, const Json& j) {
    Write(name, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  }

  void RemoveAll() {
    std::error_code ec;
    for (const std::string& name : written_) fs::remove(dir_ / name, ec);
  }

  const std::vector<std::string>& written() const { return written_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> written_;
};

ConcaveField LoadField(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open field file " + path);
  return ReadFieldCsv(is);
}

}  // namespace

GameSpec ParseSpec(const std::string& text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SpecError(source + ": " + e.what());
  }
  if (!j.is_object()) throw SpecError(source + ": expected a JSON object");
  GameSpec spec;
  spec.n_states =
      static_cast<int>(Labels(Field(j, "states", source), "states", source)
                           .size());
  spec.actions_u = Labels(Field(j, "actions_u", source), "actions_u", source);
  spec.actions_v = Labels(Field(j, "actions_v", source), "actions_v", source);
  const std::size_t k = spec.n_states;
  const std::size_t nu = spec.actions_u.size();
  const std::size_t nv = spec.actions_v.size();

  const Json& rates = Array(Field(j, "rates", source), nu, "rates", source);
  spec.rates.assign(nu, std::vector<Eigen::MatrixXd>(nv));
  for (std::size_t u = 0; u < nu; ++u) {
    const std::string pu = Index("rates", u);
    const Json& row_u = Array(rates[u], nv, pu, source);
    for (std::size_t v = 0; v < nv; ++v) {
      const std::string pv = Index(pu, v);
      const Json& m = Array(row_u[v], k, pv, source);
      Eigen::MatrixXd r(k, k);
      for (std::size_t a = 0; a < k; ++a) {
        const std::string pa = Index(pv, a);
        const Json& row = Array(m[a], k, pa, source);
        for (std::size_t b = 0; b < k; ++b) {
          r(a, b) = Number(row[b], Index(pa, b), source);
        }
      }
      spec.rates[u][v] = r;
    }
  }

  const Json& payoff = Array(Field(j, "payoff", source), k, "payoff", source);
  spec.payoff.assign(k, std::vector<std::vector<double>>(
                            nu, std::vector<double>(nv, 0.0)));
  for (std::size_t s = 0; s < k; ++s) {
    const std::string ps = Index("payoff", s);
    const Json& by_u = Array(payoff[s], nu, ps, source);
    for (std::size_t u = 0; u < nu; ++u) {
      const std::string pu = Index(ps, u);
      const Json& by_v = Array(by_u[u], nv, pu, source);
      for (std::size_t v = 0; v < nv; ++v) {
        spec.payoff[s][u][v] = Number(by_v[v], Index(pu, v), source);
      }
    }
  }
  spec.discount = Number(Field(j, "discount", source), "discount", source);

  const std::vector<SpecViolation> violations = ValidateSpec(spec);
  if (!violations.empty()) {
    throw SpecError(source + ": " + FormatViolations(violations));
  }
  return spec;
}

GameSpec LoadSpec(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw SpecError(path + ": cannot open spec file");
  const std::string text((std::istreambuf_iterator<char>(is)),
                         std::istreambuf_iterator<char>());
  return ParseSpec(text, path);
}

std::string Sha256File(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot hash " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 14];
  while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(is.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

void ExportPlotData(std::ostream& os, const ConcaveField& field) {
  const SimplexGrid& grid = field.grid();
  const int k = grid.dim();
  if (k == 2) {
    os << "p2,W\n";
  } else {
    for (int i = 0; i < k; ++i) os << (i ? "," : "") << (k == 3 ? "p" : "k") << i + 1;
    os << ",W\n";
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd p = grid.point(i);
    if (k == 2) {
      os << Num(p(1));
    } else {
      for (int s = 0; s < k; ++s) os << (s ? "," : "") << Num(p(s));
    }
    os << "," << Num(field.envelope(i)) << "\n";
  }
}

int RunCommand(const RunOptions& options, std::ostream& log,
               std::ostream& err) {
  ArtifactWriter out(options.out_dir);
  try {
    static const char* kCommands[] = {"solve", "solve-dual", "check",
                                      "simulate", "evaluate"};
    if (std::find(std::begin(kCommands), std::end(kCommands),
                  options.command) == std::end(kCommands)) {
      throw std::invalid_argument("unknown subcommand \"" + options.command +
                                  "\"");
    }
    const GameSpec spec = LoadSpec(options.spec_path);
    fs::create_directories(options.out_dir);

    SolverConfig config;
    if (options.n) config.n = *options.n;
    if (options.tau) config.tau = *options.tau;
    ValidateConfig(spec, config);
    const Eigen::VectorXd p =
        options.belief
            ? ParseBelief(*options.belief, spec.n_states)
            : Eigen::VectorXd::Constant(spec.n_states, 1.0 / spec.n_states)
                  .eval();

    Json inputs;
    inputs[options.spec_path] = Sha256File(options.spec_path);

    // Primal field from --field / --primal or a fresh solve.
    auto primal = [&](const std::optional<std::string>& path) {
      if (path) {
        inputs[*path] = Sha256File(*path);
        ConcaveField f = LoadField(*path);
        if (f.grid().dim() != spec.n_states) {
          throw std::invalid_argument(*path + ": field dimension mismatch");
        }
        config.n = f.grid().resolution();
        return f;
      }
      const auto start = std::chrono::steady_clock::now();
      PrimalSolution sol = SolvePrimal(spec, config);
      log << "primal solve: " << sol.report.iterations << " iterations, "
          << std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           start)
                 .count()
          << " s\n";
      if (!sol.report.converged) {
        throw std::runtime_error("primal iteration did not converge");
      }
      out.WriteJson("convergence.json", ConvergenceJson(sol.report));
      return sol.field;
    };

    if (options.command == "solve") {
      const ConcaveField field = primal(std::nullopt);
      out.Write("field.csv", [&](std::ostream& os) { WriteFieldCsv(os, field); });
      out.Write("plot.csv", [&](std::ostream& os) { ExportPlotData(os, field); });
    } else if (options.command == "solve-dual") {
      const ConcaveField field = primal(options.primal_path);
      DualConfig dual_config;
      dual_config.tau = config.tau;
      const auto start = std::chrono::steady_clock::now();
      const DualSolution dual = SolveDual(spec, dual_config);
      log << "dual solve: " << dual.report.convergence.iterations
          << " iterations, "
          << std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           start)
                 .count()
          << " s\n";
      const double gap = DualityGap(field, dual.field);
      out.Write("dual_field.csv",
                [&](std::ostream& os) { WriteDualCsv(os, dual.field); });
      Json j = ConvergenceJson(dual.report.convergence);
      j["outside_nodes"] = dual.report.outside_nodes;
      j["duality_gap"] = gap;
      j["primal_source"] = options.primal_path ? *options.primal_path
                                               : std::string("computed");
      out.WriteJson("dual_report.json", j);
      log << "duality gap: " << gap << "\n";
    } else if (options.command == "check") {
      const ConcaveField field = primal(options.field_path);
      const ResidualReport res = ComputeResiduals(spec, field);
      const RegularityReport reg = CheckRegularity(field);
      const UniquenessReport uniq = UniquenessProbe(spec, config, options.seed);
      out.Write("residuals.csv",
                [&](std::ostream& os) { WriteResidualCsv(os, field, res); });
      Json j;
      j["min_supvar"] = res.min_supvar;
      j["max_subvar"] = res.exposed_count > 0 ? Json(res.max_subvar) : Json();
      j["exposed_count"] = res.exposed_count;
      j["mesh"] = res.mesh;
      j["nu_per_dim"] = res.nu_per_dim;
      j["regularity"] = {{"is_concave", reg.is_concave},
                         {"measured_lipschitz", reg.measured_lipschitz},
                         {"bound", reg.bound},
                         {"pass", reg.pass}};
      j["uniqueness"] = {{"max_discrepancy", uniq.max_discrepancy},
                         {"bound", uniq.bound}};
      out.WriteJson("check.json", j);
      log << "min supvar " << res.min_supvar << ", max subvar "
          << res.max_subvar << "\n";
    } else if (options.command == "simulate") {
      const double horizon = TruncationHorizon(spec.discount, options.eps);
      const ControlPath path = ConstantControls(0, 0, horizon);
      for (int i = 0; i < options.dump; ++i) {
        RngStream rng(options.seed, 3 * static_cast<std::uint64_t>(i));
        OpenLoopResolver resolver(path);
        const SimulationResult sim =
            SimulateChain(spec, p, resolver, horizon, rng);
        char name[40];
        std::snprintf(name, sizeof(name), "trajectory_%03d.csv", i);
        out.Write(name, [&](std::ostream& os) {
          WriteTrajectoryCsv(os, sim.trajectory);
        });
      }
      const double t = std::min(1.0, horizon);
      const ProbeResult probe =
          MartingaleProbe(spec, p, path, t, options.paths, options.seed);
      const PayoffEstimate est = EstimatePayoff(
          spec, p,
          [&](std::uint64_t) {
            return std::make_unique<OpenLoopResolver>(path);
          },
          options.eps, options.paths, options.seed);
      Json j;
      j["mean"] = est.mean;
      j["stderr"] = est.stderr_;
      j["n_paths"] = est.n_paths;
      j["horizon"] = est.horizon;
      j["seed"] = est.seed;
      Json m;
      m["t"] = t;
      m["p"] = std::vector<double>(p.data(), p.data() + p.size());
      m["estimate"] = std::vector<double>(
          probe.estimate.data(), probe.estimate.data() + probe.estimate.size());
      m["stderr"] = std::vector<double>(
          probe.stderr_.data(), probe.stderr_.data() + probe.stderr_.size());
      j["martingale"] = m;
      out.WriteJson("simulation.json", j);
    } else {
      const ConcaveField field = primal(options.field_path);
      const SolverStrategy strategy(spec, field, config,
                                    {0.05, 0.0, options.eps});
      const std::vector<Response> responses =
          DefaultResponseClass(spec, DefaultSwitchTimes(spec.discount));
      const BestResponseReport report =
          BestResponseProbe(spec, p, strategy.Strategy(p), responses,
                            options.eps, options.paths, options.seed);
      out.Write("probe.json",
                [&](std::ostream& os) { WriteProbeJson(os, report); });
      Json j;
      j["p"] = std::vector<double>(p.data(), p.data() + p.size());
      j["value_at_p"] = field.Eval(p);
      j["worst_payoff"] = report.worst_payoff;
      j["n_paths"] = options.paths;
      j["eps"] = options.eps;
      out.WriteJson("evaluate.json", j);
      log << "W(p) = " << field.Eval(p) << ", worst response payoff "
          << report.worst_payoff << " (" << report.argmin_id << ")\n";
    }

    Json manifest;
    manifest["subcommand"] = options.command;
    manifest["spec"] = options.spec_path;
    manifest["out_dir"] = options.out_dir;
    manifest["seed"] = options.seed;
    Json overrides = Json::object();
    if (options.n) overrides["n"] = *options.n;
    if (options.tau) overrides["tau"] = *options.tau;
    overrides["eps"] = options.eps;
    overrides["paths"] = options.paths;
    if (options.belief) overrides["p"] = *options.belief;
    manifest["config"] = overrides;
    manifest["inputs"] = inputs;
    Json outputs = Json::object();
    for (const std::string& name : out.written()) {
      outputs[name] = Sha256File((out.dir() / name).string());
    }
    manifest["outputs"] = outputs;
    out.WriteJson("manifest.json", manifest);
    return 0;
  } catch (const std::exception& e) {
    out.RemoveAll();
    err << "asymgame " << options.command << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace asymgame
