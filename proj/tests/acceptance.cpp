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


// Acceptance checks: one PASS/FAIL line per criterion.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "common.hpp"
#include "gen.hpp"
#include "oracle.hpp"
#include "qiit/qiit.hpp"
#include "qiit/tossig_data.hpp"
#include "samples.hpp"

namespace {

using namespace qiit;
namespace tm = qiit::termmodel;

constexpr std::uint64_t kRandomSeed = 20261016;
constexpr int kRandomCount = 200;

struct Failure {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

/// The random signatures shared by criteria 3 and 4.
const std::vector<Signature>& random_signatures() {
  static const std::vector<Signature> sigs = [] {
    testgen::Rng rng(kRandomSeed);
    std::vector<Signature> out;
    for (int k = 0; k < kRandomCount; ++k) {
      testgen::Gen g(rng);
      Signature sig = g.signature(1 + static_cast<std::size_t>(rng.below(12)));
      out.push_back(elaborate(surface::print(sig)));
    }
    return out;
  }();
  return sigs;
}

// ---------------------------------------------------------------------------

std::string golden_nat() {
  Signature sig = testutil::corpus("nat");
  for (const char* w : {"algebra", "displayed", "section"}) {
    std::string got = emit(translate(sig, parse_what(w)), {});
    require(got == testutil::golden(std::string("nat.") + w + ".txt"), std::string(w) + " differs from golden");
  }
  // The displays up to the leading unit and binder names.
  EmitOptions flat;
  flat.flatten_sigma = true;
  std::string alg = emit(translate(sig, What::kAlgebra), flat);
  require(alg.find("  (N : Set i)\n  × (zero : N)\n  × (suc : N → N)\n") != std::string::npos, "algebra display");
  std::string disp = emit(translate(sig, What::kDisplayed), flat);
  require(disp.find(" → (ND : N → Set i)\n  × (zeroD : ND zero)\n  × (sucD : (n : N) → ND n → ND (suc n))\n") !=
              std::string::npos,
          "displayed display");
  std::string sec = emit(translate(sig, What::kSection), flat);
  require(sec.find(" → (NS : (x : N) → ND x)\n  × (zeroS : NS zero ≡ zeroD)\n"
                   "  × (sucS : (n : N) → NS (suc n) ≡ sucD n (NS n))\n") != std::string::npos,
          "section display");
  return "3 goldens";
}

std::string corpus_validates() {
  std::size_t outputs = 0;
  for (const auto& name : testutil::corpus_names()) {
    Signature sig = testutil::corpus(name);
    std::string why;
    require(oracle::check_signature(sig, &why), name + " rejected by the reference checker: " + why);
    for (What w : kAllWhats) {
      Translation t = translate(sig, w);
      otl::Validation v = otl::validate(t.term, t.externals);
      require(v.ok, fmt::format("{} {}: {}", name, to_string(w), v.message));
      ++outputs;
    }
  }
  return fmt::format("{} signatures, {} outputs", testutil::corpus_names().size(), outputs);
}

std::string random_chains() {
  std::size_t outputs = 0;
  for (const auto& sig : random_signatures()) {
    otl::Tm alg = translate(sig, What::kAlgebra).term;
    std::size_t layers = 0;
    otl::Tm t = alg;
    while (t->kind == otl::Kind::kSigma) {
      ++layers;
      t = t->kids[0];
    }
    require(t->kind == otl::Kind::kTop && layers == sig.size(), "algebra is not a chain of n + 1 components");
    for (What w : kAllWhats) {
      Translation tr = translate(sig, w);
      otl::Validation v = otl::validate(tr.term, tr.externals);
      require(v.ok, fmt::format("{}:\n{}{}", to_string(w), surface::print(sig), v.message));
      ++outputs;
    }
  }
  return fmt::format("{} signatures, {} outputs", random_signatures().size(), outputs);
}

std::string two_routes() {
  std::size_t pairs = 0;
  auto compare = [&](const Signature& sig, const std::string& label) {
    for (What w : kAllWhats) {
      require(translate(sig, w).term == translate_via_model(sig, w).term, label + " " + std::string(to_string(w)));
      ++pairs;
    }
  };
  for (const auto& name : testutil::corpus_names()) compare(testutil::corpus(name), name);
  for (const auto& sig : random_signatures()) compare(sig, surface::print(sig));
  return fmt::format("{} pairs", pairs);
}

std::string kernel_laws() {
  auto pool = samples::generate(1200, kRandomSeed);
  for (const auto& s : pool) {
    oracle::Ctx o = samples::oracle_ctx(s.sig, s.ctx);
    require(oracle::check(o, oracle::from(s.term), oracle::from(s.type)), "ill-typed sample:\n" + samples::show(s));
  }
  samples::LawCounts laws = samples::check_laws(pool, 1);
  require(laws.checked >= 1000, "fewer than 1000 terms");
  require(laws.subst_identity == 0, "subst identity");
  require(laws.subst_composition == 0, "subst composition");
  require(laws.normalize_idempotent == 0, "normalize idempotence");
  samples::ConvCounts conv = samples::check_conv(pool, 2);
  require(conv.triples >= 1000 && conv.related > 0, "too few conv triples");
  require(conv.reflexivity + conv.symmetry + conv.transitivity == 0, "conv is not an equivalence");
  return fmt::format("{} terms, {} triples", laws.checked, conv.triples);
}

tm::ConcreteAlgebra nat_mod(int k) {
  tm::ConcreteAlgebra a;
  auto& c = a.carriers["N"][{}];
  for (int v = 0; v < k; ++v) {
    c.push_back(std::to_string(v));
    a.ops["suc"][{std::to_string(v)}] = std::to_string((v + 1) % k);
  }
  a.ops["zero"][{}] = "0";
  return a;
}

/// Candidate tables drawn from the carrier of each term's sort.
struct Tables {
  const tm::Interpretation& in;
  std::vector<tm::FreeTermPtr> terms;
  std::vector<std::vector<tm::Token>> choices;

  Tables(const tm::Interpretation& i, std::vector<tm::FreeTermPtr> ts) : in(i), terms(std::move(ts)) {
    for (const auto& t : terms) {
      std::vector<tm::Value<tm::Token>> args;
      for (const auto& a : t->args) {
        if (const auto* l = std::get_if<tm::Lit>(&a)) {
          args.push_back(*l);
        } else {
          args.push_back(tm::fold(in, *std::get<tm::FreeTermPtr>(a)));
        }
      }
      choices.push_back(*in.carrier(in.sort_of(t->entry, args)));
    }
  }

  double count() const {
    double n = 1;
    for (const auto& c : choices) n *= static_cast<double>(c.size());
    return n;
  }

  tm::Candidate at(std::size_t code) const {
    tm::Candidate cand;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      cand[terms[k]->text] = choices[k][code % choices[k].size()];
      code /= choices[k].size();
    }
    return cand;
  }

  tm::Candidate random(testgen::Rng& rng) const {
    tm::Candidate cand;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      cand[terms[k]->text] = choices[k][static_cast<std::size_t>(rng.below(static_cast<int>(choices[k].size())))];
    }
    return cand;
  }

  /// Follows the equations except at a few random terms.
  tm::Candidate near(testgen::Rng& rng) const {
    tm::Candidate cand;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      cand[terms[k]->text] = rng.chance(0.8) ? tm::fold(in, *terms[k])
                                             : choices[k][static_cast<std::size_t>(rng.below(
                                                   static_cast<int>(choices[k].size())))];
    }
    return cand;
  }
};

std::string initiality() {
  std::vector<std::tuple<std::string, Signature, tm::ConcreteAlgebra, std::uint32_t>> cases;
  for (int k : {2, 3, 5}) cases.emplace_back(fmt::format("nat mod {}", k), testutil::corpus("nat"), nat_mod(k), 8);
  cases.emplace_back("twosort", testutil::corpus("twosort"),
                     tm::algebra_from_json(nlohmann::json::parse(
                         testutil::read_file(std::string(QIIT_DATA_DIR) + "/twosort.json"))),
                     4);
  testgen::Rng rng(kRandomSeed);
  std::size_t tables = 0, passing = 0;
  for (const auto& [label, sig, alg, depth] : cases) {
    tm::validate_algebra(sig, alg);
    tm::ProbeReport rep = tm::initiality_probe(sig, alg, std::nullopt, depth);
    require(rep.existence_ok() && rep.instances > 0, label + ": fold is not a homomorphism");
    tm::Interpretation in(sig, alg);
    Tables t(in, tm::all_terms(tm::enumerate(sig, depth)));
    std::vector<tm::Candidate> cands;
    if (t.count() <= 1e5) {
      for (std::size_t code = 0; code < static_cast<std::size_t>(t.count()); ++code) cands.push_back(t.at(code));
    }
    for (int k = 0; k < 2000; ++k) cands.push_back(k % 2 ? t.random(rng) : t.near(rng));
    for (const auto& cand : cands) {
      ++tables;
      if (!tm::check_candidate(in, t.terms, cand).ok()) continue;
      ++passing;
      for (const auto& term : t.terms) {
        require(cand.at(term->text) == tm::fold(in, *term), label + ": passing table differs at " + term->text);
      }
    }
  }
  require(passing > 0, "no table passed");
  return fmt::format("{} tables, {} passing", tables, passing);
}

std::string self_description() {
  SelfTestReport rep = self_test(bundled::kToSSigText, bundled::kToSSigComponents);
  require(rep.ok, rep.failure);
  std::map<std::string, std::size_t> want{{"Con", 0}, {"Sub", 2}, {"Ty", 1}, {"Tm", 2}};
  std::map<std::string, std::size_t> got;
  for (const auto& s : rep.sorts) got[s.name] = s.arity;
  for (const auto& [name, arity] : want) {
    require(got.count(name) && got[name] == arity, fmt::format("sort {} arity", name));
  }
  return fmt::format("{} entries, {} components", rep.entries, rep.components);
}

std::string round_trips() {
  std::size_t n = 0;
  for (const auto& name : testutil::corpus_names()) {
    Signature sig = testutil::corpus(name);
    std::string printed = surface::print(sig);
    Signature back = elaborate(printed);
    require(same_telescope(sig, back) && surface::print(back) == printed, name + ": print/parse");
    EmitOptions o;
    o.backend = Backend::kSexpr;
    for (What w : kAllWhats) {
      Translation t = translate(sig, w);
      std::string text = emit(t, o);
      otl::Tm parsed = otl::parse_sexpr(text);
      require(otl::identical(parsed, t.term) && otl::to_sexpr(parsed) == text,
              name + " " + std::string(to_string(w)) + ": sexpr");
      ++n;
    }
  }
  return fmt::format("{} surface, {} sexpr", testutil::corpus_names().size(), n);
}

struct Criterion {
  int id;
  std::string name;
  double budget;  // seconds, 0 for none
  std::function<std::string()> run;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "golden Nat algebra/displayed/section", 1.0, golden_nat},
      {2, "corpus typechecks and all translations validate", 5.0, corpus_validates},
      {3, "random signatures give Σ-chains and valid outputs", 0, random_chains},
      {4, "direct and model routes are α-equal", 0, two_routes},
      {5, "kernel laws and conv equivalence", 0, kernel_laws},
      {6, "term model initiality", 10.0, initiality},
      {7, "self-description of ToSSig", 0, self_description},
      {8, "surface and sexpr round-trips", 0, round_trips},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = c.run();
    } catch (const Failure& f) {
      ok = false;
      detail = f.what;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && c.budget > 0 && secs >= c.budget) {
      ok = false;
      detail += fmt::format("; over budget of {:.0f}s", c.budget);
    }
    if (!ok) ++failed;
    std::cout << fmt::format("{} [{}] {}: {} ({:.2f}s)\n", ok ? "PASS" : "FAIL", c.id, c.name, detail, secs);
  }
  return failed == 0 ? 0 : 1;
}
