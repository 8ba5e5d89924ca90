// Copyright 2026 The povm-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "povm/cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "povm/classify.hpp"
#include "povm/construct.hpp"
#include "povm/io.hpp"

namespace povm::cli {

namespace {

using io::json;

enum class Format { Table, Json };

struct CliConfig {
  std::optional<double> herm_tol;
  std::optional<double> psd_tol;
  std::optional<double> rank_tol;
  std::optional<double> indep_tol;
  std::optional<double> recon_tol;
  std::optional<double> zero_effect_tol;
  std::uint64_t seed = 1;
  Format format = Format::Table;
  std::string out_path;

  Tolerances tolerances() const {
    Tolerances t;
    if (herm_tol) t.herm_tol = *herm_tol;
    if (psd_tol) t.psd_tol = *psd_tol;
    if (rank_tol) t.rank_tol = *rank_tol;
    if (indep_tol) t.indep_tol = *indep_tol;
    if (recon_tol) t.recon_tol = *recon_tol;
    if (zero_effect_tol) t.zero_effect_tol = *zero_effect_tol;
    if (const char* scale = std::getenv("POVM_FORGE_TOL_SCALE"); scale && *scale) {
      char* end = nullptr;
      const double f = std::strtod(scale, &end);
      if (end == scale || *end != '\0') {
        throw Error(ErrorKind::BadTolerance, "POVM_FORGE_TOL_SCALE is not a number");
      }
      t = t.scaled(f);
    }
    t.check();
    return t;
  }
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Io:
    case ErrorKind::BadTolerance:
      return kParseFailure;
    case ErrorKind::NonConvergence:
      return kNonConvergence;
    default:
      return kDomainFailure;
  }
}

std::string format_list(const std::vector<Index>& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
  os << "]";
  return os.str();
}

class Commands {
 public:
  Commands(const CliConfig& cfg, std::ostream& out, std::ostream& err)
      : cfg_(cfg), out_(out), err_(err), tol_(cfg.tolerances()) {}

  int validate_cmd(const std::string& path) {
    const auto p = io::read_povm(path);
    const auto violations = check(p, tol_);
    if (cfg_.format == Format::Json) {
      json vs = json::array();
      for (const auto& v : violations) {
        vs.push_back({{"kind", std::string(to_string(v.kind))},
                      {"outcome", v.outcome ? json(*v.outcome + 1) : json(nullptr)},
                      {"residual", v.residual},
                      {"message", v.message}});
      }
      out_ << json{{"valid", violations.empty()},
                   {"dim", p.dim()},
                   {"outcomes", p.size()},
                   {"violations", std::move(vs)}}
                  .dump(2)
           << '\n';
    } else if (violations.empty()) {
      out_ << "valid POVM: d=" << p.dim() << ", N=" << p.size() << '\n';
    } else {
      out_ << "invalid POVM: d=" << p.dim() << ", N=" << p.size() << '\n';
      for (const auto& v : violations) {
        out_ << "  " << to_string(v.kind) << ": " << v.message << " (residual "
             << std::setprecision(6) << v.residual << ")\n";
      }
    }
    return violations.empty() ? kSuccess : kDomainFailure;
  }

  int classify_cmd(const std::string& path) {
    const auto p = validate(io::read_povm(path), tol_);
    const auto c = classify(p, tol_);
    const auto d = static_cast<std::size_t>(c.dim);
    const bool bounds = !(c.extremal && c.is_rank1) ||
                        (d <= c.nonzero_count && c.nonzero_count <= d * d);
    if (cfg_.format == Format::Json) {
      out_ << json{{"dim", c.dim},
                   {"outcomes", p.size()},
                   {"nonzero_outcomes", c.nonzero_count},
                   {"is_rank1", c.is_rank1},
                   {"is_pvm", c.is_pvm},
                   {"extremal", c.extremal},
                   {"borderline", c.borderline},
                   {"type", std::string(to_string(c.type))},
                   {"rank_profile", c.rank_profile},
                   {"bounds_ok", bounds}}
                  .dump(2)
           << '\n';
    } else {
      out_ << "dimension: " << c.dim << '\n'
           << "nonzero outcomes: " << c.nonzero_count << '\n'
           << "rank-1: " << (c.is_rank1 ? "yes" : "no") << '\n'
           << "PVM: " << (c.is_pvm ? "yes" : "no") << '\n';
      if (c.extremal && c.is_rank1) {
        out_ << "outcome bounds: " << d << " <= " << c.nonzero_count << " <= " << d * d
             << (bounds ? " (ok)" : " (violated)") << '\n';
      }
      if (c.extremal) {
        out_ << "extremal, type (" << to_string(c.type) << "), rank profile "
             << format_list(c.rank_profile) << '\n';
      } else {
        out_ << "not extremal" << (c.borderline ? " (borderline)" : "") << ", rank profile "
             << format_list(c.rank_profile) << '\n';
      }
    }
    return kSuccess;
  }

  int decompose_cmd(const std::string& path) {
    const auto p = validate(io::read_povm(path), tol_);
    const auto cert = decompose(p, tol_);
    const auto report = verify_certificate(cert, tol_);
    const auto doc = io::to_json(cert);
    std::ostream& summary = emit_document(doc);

    if (cfg_.format == Format::Json) {
      json weights = json::array();
      for (const auto& c : cert.components) weights.push_back(c.weight);
      summary << json{{"components", cert.components.size()},
                      {"weights", std::move(weights)},
                      {"max_residual", report.max_residual},
                      {"weight_sum_residual", report.weight_sum_residual},
                      {"dropped_weight", cert.trace.dropped_weight},
                      {"verified", report.passed},
                      {"failures", report.failures}}
                     .dump(2)
              << '\n';
    } else {
      summary << "components: " << cert.components.size() << '\n' << "weights:";
      summary << std::setprecision(6);
      for (const auto& c : cert.components) summary << ' ' << c.weight;
      summary << '\n'
              << "reconstruction residual: " << report.max_residual << '\n'
              << "weight-sum residual: " << report.weight_sum_residual << '\n';
      if (cert.trace.dropped_components > 0) {
        summary << "dropped " << cert.trace.dropped_components
                << " negligible components (total weight " << cert.trace.dropped_weight
                << ")\n";
      }
      summary << "verification: " << (report.passed ? "passed" : "FAILED") << '\n';
      for (const auto& f : report.failures) summary << "  " << f << '\n';
    }
    return report.passed ? kSuccess : kDomainFailure;
  }

  int construct_cmd(Index d, Index n) {
    const auto p = construct_extremal_rank1<double>(d, n, tol_);
    const bool extremal = is_extremal_rank1(p, tol_);
    std::ostream& summary = emit_document(io::to_json(p));
    summary << "constructed " << n << "-outcome rank-1 POVM on d=" << d << ": "
            << (extremal ? "extremal" : "NOT extremal") << '\n';
    return extremal ? kSuccess : kDomainFailure;
  }

  int examples_cmd(const std::string& name) {
    Povm<double> p;
    if (name == "qubit3") {
      p = qubit_example<double>();
    } else if (name == "type_d") {
      p = type_d_example<double>();
    } else if (name.rfind("onb:", 0) == 0) {
      Index d = 0;
      try {
        std::size_t used = 0;
        d = std::stol(name.substr(4), &used);
        if (used != name.size() - 4) d = 0;
      } catch (const std::exception&) {
        d = 0;
      }
      if (d < 1) throw Error(ErrorKind::UnknownExample, "bad dimension in " + name);
      p = onb_pvm<double>(d);
    } else {
      throw Error(ErrorKind::UnknownExample, "unknown example " + name);
    }
    std::ostream& summary = emit_document(io::to_json(p));
    summary << "example " << name << ": d=" << p.dim() << ", N=" << p.size() << '\n';
    if (cfg_.format == Format::Table && &summary == &out_) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        summary << "A(" << j + 1 << ") =\n" << io::format_matrix(p[j]);
      }
    }
    return kSuccess;
  }

  int stats_cmd(const std::string& povm_path, const std::string& cert_path,
                std::size_t trials) {
    const auto p = validate(io::read_povm(povm_path), tol_);
    const auto cert = io::read_certificate(cert_path);
    if (cert.target.size() != p.size() || !equivalent(cert.target, p, tol_)) {
      throw Error(ErrorKind::TargetMismatch, "certificate does not target this POVM");
    }
    const auto verified = verify_certificate(cert, tol_);
    const auto stats = statistics_equivalence(cert, trials, cfg_.seed, tol_);
    const bool ok = verified.passed && stats.passed;
    if (cfg_.format == Format::Json) {
      out_ << json{{"trials", trials},
                   {"seed", cfg_.seed},
                   {"max_deviation", stats.max_deviation},
                   {"deviations", stats.deviations},
                   {"certificate_verified", verified.passed},
                   {"passed", ok}}
                  .dump(2)
           << '\n';
    } else {
      out_ << "trials: " << trials << " (seed " << cfg_.seed << ")\n";
      if (trials == 0) out_ << "no states sampled\n";
      out_ << "max deviation: " << std::setprecision(6) << stats.max_deviation << '\n'
           << "certificate verification: " << (verified.passed ? "passed" : "FAILED") << '\n';
      for (const auto& f : verified.failures) out_ << "  " << f << '\n';
      out_ << (ok ? "statistics match" : "statistics DO NOT match") << '\n';
    }
    return ok ? kSuccess : kDomainFailure;
  }

  int search_cmd(Index d, Index n, std::size_t groups, std::size_t trials) {
    const auto hits = search_type_d<double>(d, n, groups, trials, cfg_.seed, tol_);
    if (cfg_.format == Format::Json) {
      json arr = json::array();
      for (const auto& h : hits) {
        arr.push_back({{"seed", h.seed},
                       {"rank_profile", h.classification.rank_profile},
                       {"povm", io::to_json(h.povm)}});
      }
      out_ << json{{"trials", trials}, {"hits", std::move(arr)}}.dump(2) << '\n';
    } else {
      out_ << "type-(d) candidates: " << hits.size() << " of " << trials << " trials\n";
      for (const auto& h : hits) {
        out_ << "  seed " << h.seed << ", rank profile "
             << format_list(h.classification.rank_profile) << '\n';
      }
    }
    return kSuccess;
  }

 private:
  // Writes the document to --out, or to stdout when no path is given. The
  // returned stream is where the human summary belongs.
  std::ostream& emit_document(const json& doc) {
    if (!cfg_.out_path.empty()) {
      io::write_json(cfg_.out_path, doc);
      return out_;
    }
    out_ << doc.dump(2) << '\n';
    return err_;
  }

  const CliConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
  Tolerances tol_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"povm-forge: POVM extremality, decomposition and construction tools",
               "povm-forge"};
  app.require_subcommand(1);
  app.fallthrough();

  CliConfig cfg;
  app.add_option("--tol-herm", cfg.herm_tol, "Hermiticity tolerance");
  app.add_option("--tol-psd", cfg.psd_tol, "allowed negative eigenvalue magnitude");
  app.add_option("--tol-rank", cfg.rank_tol, "relative eigenvalue cutoff for ranks");
  app.add_option("--tol-indep", cfg.indep_tol, "relative singular cutoff for independence");
  app.add_option("--tol-recon", cfg.recon_tol, "reconstruction tolerance (Frobenius)");
  app.add_option("--tol-zero-effect", cfg.zero_effect_tol, "norm below which an effect is zero");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--format", cfg.format, "output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Format>{{"table", Format::Table}, {"json", Format::Json}}));
  app.add_option("--out", cfg.out_path, "output file");

  std::string path;
  std::string cert_path;
  std::string name;
  Index d = 0;
  Index n = 0;
  std::size_t trials = 100;
  std::size_t groups = 3;

  auto* validate_sc = app.add_subcommand("validate", "check POVM invariants");
  validate_sc->add_option("path", path)->required();
  auto* classify_sc = app.add_subcommand("classify", "rank, PVM and extremal type");
  classify_sc->add_option("path", path)->required();
  auto* decompose_sc =
      app.add_subcommand("decompose", "mixture of relabeled extremal rank-1 POVMs");
  decompose_sc->add_option("path", path)->required();
  auto* construct_sc = app.add_subcommand("construct", "extremal rank-1 POVM with n outcomes");
  construct_sc->add_option("d", d)->required();
  construct_sc->add_option("n", n)->required();
  auto* examples_sc = app.add_subcommand("examples", "reference POVMs: qubit3, type_d, onb:<d>");
  examples_sc->add_option("name", name)->required();
  auto* stats_sc = app.add_subcommand("stats", "compare outcome statistics of a certificate");
  stats_sc->add_option("povm", path)->required();
  stats_sc->add_option("certificate", cert_path)->required();
  stats_sc->add_option("--trials", trials, "number of random states");
  auto* search_sc = app.add_subcommand("search-type-d", "random search for type-(d) POVMs");
  search_sc->add_option("d", d)->required();
  search_sc->add_option("n", n, "rank-1 outcomes before merging")->required();
  search_sc->add_option("--groups", groups, "outcomes after merging");
  search_sc->add_option("--trials", trials, "number of random draws");

  std::vector<const char*> argv{"povm-forge"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kParseFailure;
  }

  try {
    Commands cmd(cfg, out, err);
    if (*validate_sc) return cmd.validate_cmd(path);
    if (*classify_sc) return cmd.classify_cmd(path);
    if (*decompose_sc) return cmd.decompose_cmd(path);
    if (*construct_sc) return cmd.construct_cmd(d, n);
    if (*examples_sc) return cmd.examples_cmd(name);
    if (*stats_sc) return cmd.stats_cmd(path, cert_path, trials);
    if (*search_sc) return cmd.search_cmd(d, n, groups, trials);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return kParseFailure;
}

}  // namespace povm::cli
