// Copyright 2026 The qiit-elab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// qiit-elab: check, translate and emit QIIT signatures.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <unistd.h>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "qiit/qiit.hpp"
#include "qiit/tossig_data.hpp"

namespace {

using qiit::Error;
using qiit::ErrorKind;

bool use_color() {
  const char* c = std::getenv("QIIT_COLOR");
  std::string mode = c ? c : "auto";
  if (mode == "always") return true;
  if (mode == "never") return false;
  return isatty(STDERR_FILENO) != 0;
}

void report(const std::string& file, const Error& e) {
  std::string d = qiit::format_diagnostic(file, e);
  if (use_color()) {
    auto at = d.find("error:");
    if (at != std::string::npos) d.replace(at, 6, "\x1b[1;31merror:\x1b[0m");
  }
  std::cerr << d << "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kBadInput, fmt::format("cannot read {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kBadInput, fmt::format("{}: {}", path, e.what()));
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kBadInput, fmt::format("cannot write {}", path));
  out << text;
}

std::string extension(qiit::Backend b) {
  switch (b) {
    case qiit::Backend::kAgdaText: return ".agda";
    case qiit::Backend::kSexpr: return ".sexp";
    case qiit::Backend::kJson: return ".json";
  }
  return "";
}

// ---------------------------------------------------------------------------

struct CheckArgs {
  std::string file;
};

int run_check(const CheckArgs& a) {
  qiit::Signature sig = qiit::elaborate(read_file(a.file));
  fmt::print("ok: {}, {} entries, level {}\n", sig.name, sig.size(), sig.level_j);
  return 0;
}

struct EmitArgs {
  std::string file;
  std::string what = "algebra";
  std::string backend = "agda-text";
  std::optional<std::uint32_t> level;
  std::string out;
  bool flatten = false;
  std::string route = "direct";
};

int run_emit(const EmitArgs& a) {
  qiit::Signature sig = qiit::elaborate(read_file(a.file));
  qiit::EmitOptions opts;
  auto b = qiit::parse_backend(a.backend);
  if (!b) throw CLI::ValidationError("--backend", "unknown backend " + a.backend);
  opts.backend = *b;
  opts.level_arg = a.level;
  opts.flatten_sigma = a.flatten;

  std::vector<qiit::What> whats;
  if (a.what == "all") {
    if (a.out.empty()) throw CLI::ValidationError("--what", "--what all needs --out");
    whats.assign(std::begin(qiit::kAllWhats), std::end(qiit::kAllWhats));
  } else {
    whats.push_back(qiit::parse_what(a.what));
  }
  for (qiit::What w : whats) {
    qiit::Translation t = a.route == "model" ? qiit::translate_via_model(sig, w) : qiit::translate(sig, w);
    std::string text = qiit::emit(t, opts);
    if (a.out.empty()) {
      std::cout << text;
      if (opts.backend != qiit::Backend::kAgdaText) std::cout << "\n";
    } else if (whats.size() > 1) {
      write_file(fmt::format("{}-{}{}", a.out, qiit::to_string(w), extension(opts.backend)), text);
    } else {
      write_file(a.out, text);
    }
  }
  return 0;
}

struct TermModelArgs {
  std::string file;
  std::uint32_t depth = 3;
  std::string algebra;
  std::string target;
  std::string hom;
  std::string candidate;
  std::string format = "text";
  bool list = false;
};

int run_term_model(const TermModelArgs& a) {
  namespace tmod = qiit::termmodel;
  qiit::Signature sig = qiit::elaborate(read_file(a.file));
  if (auto v = tmod::is_plain(sig)) {
    throw Error(ErrorKind::kNotPlain, fmt::format("term model needs a plain signature: {}", *v));
  }
  bool json = a.format == "json";
  nlohmann::ordered_json j;
  j["signature"] = sig.name;
  j["depth"] = a.depth;
  j["sorts"] = nlohmann::ordered_json::array();

  tmod::Enumerator::Pool pool = tmod::enumerate(sig, a.depth);
  for (const auto& [sort, terms] : pool) {
    if (json) {
      nlohmann::ordered_json s{{"sort", sort.text}, {"count", terms.size()}};
      if (a.list) {
        s["terms"] = nlohmann::ordered_json::array();
        for (const auto& t : terms) s["terms"].push_back(t->text);
      }
      j["sorts"].push_back(s);
    } else {
      fmt::print("sort {}: {} terms\n", sort.text, terms.size());
      if (a.list) {
        for (const auto& t : terms) fmt::print("  {}\n", t->text);
      }
    }
  }

  int status = 0;
  if (!a.algebra.empty()) {
    tmod::ConcreteAlgebra alg = tmod::algebra_from_json(read_json(a.algebra));
    tmod::validate_algebra(sig, alg);
    std::optional<tmod::Candidate> cand;
    if (!a.candidate.empty()) cand = read_json(a.candidate).get<tmod::Candidate>();
    tmod::ProbeReport rep = tmod::initiality_probe(sig, alg, cand, a.depth);
    std::size_t ok = rep.instances - rep.existence_failures.size();
    if (!rep.existence_ok()) status = 1;
    if (json) {
      j["fold"] = {{"instances", rep.instances}, {"ok", ok}, {"failures", rep.existence_failures}};
    } else {
      fmt::print("fold is a homomorphism: {}/{} instances ok\n", ok, rep.instances);
      for (const auto& f : rep.existence_failures) fmt::print("  fails at {}\n", f);
    }
    if (rep.has_candidate) {
      if (json) {
        j["candidate"] = {{"homomorphism", rep.candidate_hom.ok()},
                          {"compared", rep.compared},
                          {"counterexamples", rep.counterexamples}};
      } else if (!rep.candidate_hom.ok()) {
        const auto& v = rep.candidate_hom.violations.front();
        fmt::print("candidate is not a homomorphism: {} violations, first at {} {} ({} vs {})\n",
                   rep.candidate_hom.violations.size(), v.entry, tmod::join(v.args), v.lhs, v.rhs);
      }
      if (!json) {
        fmt::print("candidate agrees with fold: {}/{} terms\n", rep.compared - rep.counterexamples.size(),
                   rep.compared);
        for (const auto& c : rep.counterexamples) fmt::print("  differs at {}\n", c);
      }
      if (!rep.uniqueness_ok()) status = 1;
    }
    if (!a.hom.empty()) {
      tmod::ConcreteAlgebra tgt = a.target.empty() ? alg : tmod::algebra_from_json(read_json(a.target));
      if (!a.target.empty()) tmod::validate_algebra(sig, tgt);
      tmod::HomReport hr = tmod::check_hom(sig, alg, tgt, tmod::hom_from_json(read_json(a.hom)));
      if (!hr.ok()) status = 1;
      if (json) {
        nlohmann::ordered_json vs = nlohmann::ordered_json::array();
        for (const auto& v : hr.violations) {
          vs.push_back({{"entry", v.entry}, {"args", v.args}, {"lhs", v.lhs}, {"rhs", v.rhs}});
        }
        j["hom"] = {{"checked", hr.checked}, {"violations", vs}};
      } else {
        fmt::print("hom: {}/{} equations hold\n", hr.checked - hr.violations.size(), hr.checked);
        for (const auto& v : hr.violations) {
          fmt::print("  {} {}: {} vs {}\n", v.entry, tmod::join(v.args), v.lhs, v.rhs);
        }
      }
    }
  } else if (!a.hom.empty() || !a.candidate.empty()) {
    throw CLI::ValidationError("--algebra", "--hom and --candidate need --algebra");
  }
  if (json) std::cout << j.dump(2) << "\n";
  return status;
}

struct SelfTestArgs {
  bool quiet = false;
  std::string signature;
  std::optional<std::size_t> expected;
};

int run_self_test(const SelfTestArgs& a) {
  std::string text = a.signature.empty() ? qiit::bundled::kToSSigText : read_file(a.signature);
  std::size_t expected = a.expected.value_or(qiit::bundled::kToSSigComponents);
  qiit::SelfTestReport rep = qiit::self_test(text, expected);
  if (!a.quiet) {
    fmt::print("entries: {}\n", rep.entries);
    fmt::print("algebra components: {} (expected {})\n", rep.components, rep.expected);
    for (const auto& w : rep.validated) fmt::print("validated: {}\n", w);
    for (const auto& s : rep.sorts) fmt::print("sort {}: arity {}\n", s.name, s.arity);
  }
  if (!rep.ok) {
    std::cerr << "self-test failed: " << rep.failure << "\n";
    return 1;
  }
  if (!a.quiet) fmt::print("self-test: ok\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Elaborate QIIT signatures and emit their algebras, displayed algebras, sections, "
               "morphisms and induction principles."};
  app.require_subcommand(1);

  CheckArgs ca;
  auto* check = app.add_subcommand("check", "Type-check a signature");
  check->add_option("file", ca.file, "Signature file")->required();

  EmitArgs ea;
  auto* emit = app.add_subcommand("emit", "Translate and emit a signature");
  emit->add_option("file", ea.file, "Signature file")->required();
  emit->add_option("--what", ea.what, "algebra, displayed, section, morphism, induction or all")
      ->check(CLI::IsMember({"algebra", "displayed", "section", "morphism", "induction", "all"}));
  emit->add_option("--backend", ea.backend, "agda-text, sexpr or json")
      ->check(CLI::IsMember({"agda-text", "sexpr", "json"}));
  emit->add_option("--level", ea.level, "Instantiate the universe level variable");
  emit->add_option("--out", ea.out, "Output file (prefix with --what all)");
  emit->add_flag("--flatten", ea.flatten, "Drop the leading unit of Σ-chains when printing");
  emit->add_option("--route", ea.route, "direct or model")->check(CLI::IsMember({"direct", "model"}));

  TermModelArgs ta;
  auto* term = app.add_subcommand("term-model", "Enumerate closed terms and probe initiality");
  term->add_option("file", ta.file, "Signature file")->required();
  term->add_option("--depth", ta.depth, "Maximum constructor depth");
  term->add_option("--algebra", ta.algebra, "Concrete algebra (JSON)");
  term->add_option("--target", ta.target, "Target algebra for --hom (default: --algebra)");
  term->add_option("--hom", ta.hom, "Homomorphism table to check (JSON)");
  term->add_option("--candidate", ta.candidate, "Map from terms to tokens to compare with fold (JSON)");
  term->add_option("--format", ta.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  term->add_flag("--list", ta.list, "List the enumerated terms");

  SelfTestArgs sa;
  auto* self = app.add_subcommand("self-test", "Elaborate and translate the bundled signature of signatures");
  self->add_flag("--quiet", sa.quiet, "Only report failures");
  self->add_option("--signature", sa.signature, "Use this file instead of the bundled one");
  self->add_option("--expected", sa.expected, "Expected number of algebra components");

  std::string file;
  try {
    app.parse(argc, argv);
    if (check->parsed()) {
      file = ca.file;
      return run_check(ca);
    }
    if (emit->parsed()) {
      file = ea.file;
      return run_emit(ea);
    }
    if (term->parsed()) {
      file = ta.file;
      return run_term_model(ta);
    }
    file = sa.signature.empty() ? "tossig" : sa.signature;
    return run_self_test(sa);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    report(file.empty() ? "qiit-elab" : file, e);
    return 1;
  }
}
