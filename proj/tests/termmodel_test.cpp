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


#include <gtest/gtest.h>

#include <nlohmann/json.hpp>
#include <set>
#include <string>
#include <vector>

#include "common.hpp"
#include "gen.hpp"
#include "qiit/qiit.hpp"

namespace {

using namespace qiit;
using namespace qiit::termmodel;
using testutil::corpus;

ConcreteAlgebra data(const std::string& name) {
  return algebra_from_json(nlohmann::json::parse(testutil::read_file(std::string(QIIT_DATA_DIR) + "/" + name)));
}

/// zero ↦ 0, suc ↦ +1 mod k.
ConcreteAlgebra nat_mod(int k) {
  ConcreteAlgebra a;
  auto& c = a.carriers["N"][{}];
  for (int v = 0; v < k; ++v) {
    c.push_back(std::to_string(v));
    a.ops["suc"][{std::to_string(v)}] = std::to_string((v + 1) % k);
  }
  a.ops["zero"][{}] = "0";
  return a;
}

std::size_t count_suc(const std::string& text) {
  std::size_t n = 0;
  for (std::size_t p = text.find("suc"); p != std::string::npos; p = text.find("suc", p + 1)) ++n;
  return n;
}

std::set<std::string> texts_of(const Enumerator::Pool& pool) {
  std::set<std::string> out;
  for (const auto& t : all_terms(pool)) out.insert(t->text);
  return out;
}

/// Random total algebra with carriers of 1 to 4 elements, built entry by entry.
ConcreteAlgebra random_algebra(const Signature& sig, testgen::Rng& rng) {
  ConcreteAlgebra alg;
  for (std::size_t e = 0; e < sig.size(); ++e) {
    Interpretation in(sig, alg);
    const std::string& name = sig.entries[e].name;
    if (in.telescopes()[e].is_sort) {
      auto& slot = alg.carriers[name];
      std::size_t next = 0;
      in.for_each_tuple(e, [&](const std::vector<Value<Token>>& args) {
        auto& c = slot[texts(args)];
        int size = 1 + rng.below(4);
        for (int k = 0; k < size; ++k) c.push_back(name + "_" + std::to_string(next++));
      });
      continue;
    }
    auto& table = alg.ops[name];
    in.for_each_tuple(e, [&](const std::vector<Value<Token>>& args) {
      const std::vector<Token>* c = in.carrier(in.sort_of(e, args));
      table[texts(args)] = (*c)[static_cast<std::size_t>(rng.below(static_cast<int>(c->size())))];
    });
  }
  return alg;
}

/// Candidate tables that follow the equations with high probability.
Candidate random_candidate(const Interpretation& in, const std::vector<FreeTermPtr>& terms, testgen::Rng& rng,
                           double faithful) {
  std::vector<FreeTermPtr> sorted = terms;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a->depth < b->depth; });
  Candidate cand;
  for (const auto& t : sorted) {
    std::vector<Value<Token>> args;
    for (const auto& a : t->args) {
      if (const auto* l = std::get_if<Lit>(&a)) {
        args.push_back(*l);
      } else {
        args.push_back(cand.at(std::get<FreeTermPtr>(a)->text));
      }
    }
    if (rng.chance(faithful)) {
      cand[t->text] = in.apply(t->entry, args);
    } else {
      const std::vector<Token>* c = in.carrier(in.sort_of(t->entry, args));
      cand[t->text] = (*c)[static_cast<std::size_t>(rng.below(static_cast<int>(c->size())))];
    }
  }
  return cand;
}

/// Plain random signatures of up to 6 entries with 1 to 2000 terms of depth ≤ 3.
std::vector<Signature> plain_signatures(int want, std::uint64_t seed) {
  testgen::Rng rng(seed);
  testgen::Options opts;
  opts.externals = false;
  opts.max_binders = 2;
  std::vector<Signature> out{corpus("nat"), corpus("twosort"),
                             elaborate("sig F { S : U; T : Bool => S => U; s : El S;"
                                       " t : (b : Bool) -> El (T b s); u : Fin 3 => El S; }")};
  while (static_cast<int>(out.size()) < want) {
    testgen::Gen g(rng, opts);
    Signature sig = g.signature(1 + rng.below(6));
    if (is_plain(sig)) continue;
    std::size_t n = all_terms(enumerate(sig, 3)).size();
    if (n > 0 && n <= 2000) out.push_back(sig);
  }
  return out;
}

TEST(Plain, CorpusClassification) {
  EXPECT_FALSE(is_plain(corpus("nat")));
  EXPECT_FALSE(is_plain(corpus("twosort")));
  EXPECT_FALSE(is_plain(corpus("empty")));
  EXPECT_EQ(is_plain(corpus("receq")).value_or(""), "Id at entry f");
  EXPECT_EQ(is_plain(corpus("tree")).value_or(""), "Π^ext over a non-finite set at entry node");
  EXPECT_TRUE(is_plain(corpus("category")));
  try {
    enumerate(corpus("category"), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotPlain);
  }
}

TEST(Enumerate, NatHasOneTermPerDepth) {
  Signature sig = corpus("nat");
  for (std::uint32_t d = 1; d <= 12; ++d) EXPECT_EQ(all_terms(enumerate(sig, d)).size(), d);
  auto terms = texts_of(enumerate(sig, 3));
  EXPECT_EQ(terms, (std::set<std::string>{"zero", "suc zero", "suc (suc zero)"}));
}

TEST(Enumerate, TwoSort) {
  Signature sig = corpus("twosort");
  auto pool = enumerate(sig, 1);
  EXPECT_EQ(texts_of(pool), (std::set<std::string>{"a"}));
  pool = enumerate(sig, 2);
  EXPECT_EQ(texts_of(pool), (std::set<std::string>{"a", "b a"}));
  std::set<std::string> sorts;
  for (const auto& [s, ts] : pool) sorts.insert(s.text);
  EXPECT_EQ(sorts, (std::set<std::string>{"A", "B a"}));
  EXPECT_EQ(texts_of(enumerate(sig, 4)), texts_of(pool));
}

TEST(Enumerate, MetaBinders) {
  Signature sig = elaborate("sig F { S : U; s : El S; u : Fin 3 => S => El S; }");
  // depth 1: s; depth 2: u k s; depth 3: u k (u k' s).
  EXPECT_EQ(all_terms(enumerate(sig, 2)).size(), 4u);
  EXPECT_EQ(all_terms(enumerate(sig, 3)).size(), 1u + 3u + 9u);
  EXPECT_TRUE(texts_of(enumerate(sig, 2)).count("u 2 s"));
}

TEST(Enumerate, Monotone) {
  for (const auto& sig : plain_signatures(40, 3)) {
    std::set<std::string> prev;
    for (std::uint32_t d = 1; d <= 3; ++d) {
      auto now = texts_of(enumerate(sig, d));
      EXPECT_TRUE(std::includes(now.begin(), now.end(), prev.begin(), prev.end())) << surface::print(sig);
      prev = std::move(now);
    }
  }
}

TEST(Fold, ModularArithmetic) {
  Signature sig = corpus("nat");
  ConcreteAlgebra m3 = nat_mod(3);
  auto terms = all_terms(enumerate(sig, 4));
  std::map<std::string, Token> got;
  for (const auto& t : terms) got[t->text] = fold(sig, m3, *t);
  EXPECT_EQ(got["zero"], "0");
  EXPECT_EQ(got["suc (suc zero)"], "2");
  EXPECT_EQ(got["suc (suc (suc zero))"], "0");
  for (int k : {2, 3, 5, 6}) {
    ConcreteAlgebra a = nat_mod(k);
    for (const auto& t : all_terms(enumerate(sig, 9))) {
      EXPECT_EQ(fold(sig, a, *t), std::to_string(count_suc(t->text) % static_cast<std::size_t>(k)));
    }
  }
}

TEST(Fold, DataFilesMatchGeneratedAlgebras) {
  for (int k : {2, 3, 5, 6}) {
    ConcreteAlgebra a = data("nat_mod" + std::to_string(k) + ".json");
    EXPECT_EQ(a.carriers, nat_mod(k).carriers);
    EXPECT_EQ(a.ops, nat_mod(k).ops);
  }
}

TEST(Fold, TableMiss) {
  ConcreteAlgebra a = nat_mod(3);
  a.ops["suc"].erase({"2"});
  Signature sig = corpus("nat");
  EXPECT_THROW(validate_algebra(sig, a), Error);
  auto terms = all_terms(enumerate(sig, 4));
  try {
    for (const auto& t : terms) fold(sig, a, *t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kTableMiss);
  }
}

TEST(Fold, IsAHomomorphismForRandomAlgebras) {
  testgen::Rng rng(77);
  auto sigs = plain_signatures(30, 4);
  std::size_t algebras = 0;
  for (const auto& sig : sigs) {
    auto pool = enumerate(sig, 3);
    for (int k = 0; k < 5; ++k) {
      ConcreteAlgebra alg = random_algebra(sig, rng);
      ASSERT_NO_THROW(validate_algebra(sig, alg)) << surface::print(sig);
      ProbeReport rep = initiality_probe(sig, alg, std::nullopt, 3);
      EXPECT_TRUE(rep.existence_ok()) << surface::print(sig);
      EXPECT_EQ(rep.instances, all_terms(pool).size());
      ++algebras;
    }
  }
  EXPECT_GE(algebras, 100u);
}

TEST(Fold, IsAHomomorphismIntoSmallCarriers) {
  // Sub-carriers of random algebras are closed under the operations, so
  // fold lands in them; check the tokens directly.
  testgen::Rng rng(78);
  Signature sig = corpus("twosort");
  for (int k = 0; k < 100; ++k) {
    ConcreteAlgebra alg = random_algebra(sig, rng);
    Interpretation in(sig, alg);
    for (const auto& t : all_terms(enumerate(sig, 3))) {
      Token v = fold(in, *t);
      if (t->head == "a") EXPECT_EQ(v, alg.ops["a"][{}]);
      if (t->head == "b") EXPECT_EQ(v, alg.ops["b"][{alg.ops["a"][{}]}]);
    }
  }
}

TEST(Hom, ModSixToModThree) {
  Signature sig = corpus("nat");
  HomMap h = hom_from_json(nlohmann::json::parse(testutil::read_file(std::string(QIIT_DATA_DIR) + "/hom_mod6_mod3.json")));
  HomReport rep = check_hom(sig, nat_mod(6), nat_mod(3), h);
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.checked, 7u);
  HomMap bad =
      hom_from_json(nlohmann::json::parse(testutil::read_file(std::string(QIIT_DATA_DIR) + "/hom_mod6_mod3_bad.json")));
  EXPECT_FALSE(check_hom(sig, nat_mod(6), nat_mod(3), bad).ok());
}

TEST(Hom, ConstantMapViolatesSuc) {
  Signature sig = corpus("nat");
  HomMap h;
  for (const char* v : {"0", "1", "2"}) h["N"][{{}, v}] = "0";
  HomReport rep = check_hom(sig, nat_mod(3), nat_mod(3), h);
  ASSERT_FALSE(rep.ok());
  for (const auto& v : rep.violations) EXPECT_EQ(v.entry, "suc");
  EXPECT_EQ(rep.violations.front().lhs, "0");
  EXPECT_EQ(rep.violations.front().rhs, "1");
}

TEST(Hom, EmptySignatureIsVacuous) {
  HomReport rep = check_hom(corpus("empty"), {}, {}, {});
  EXPECT_TRUE(rep.ok());
  EXPECT_EQ(rep.checked, 0u);
}

TEST(Hom, BruteForceModK) {
  // Maps mod a → mod b that are homomorphisms exist iff b divides a.
  Signature sig = corpus("nat");
  for (int a = 1; a <= 4; ++a) {
    for (int b = 1; b <= 3; ++b) {
      int homs = 0;
      int total = 1;
      for (int k = 0; k < a; ++k) total *= b;
      for (int code = 0; code < total; ++code) {
        HomMap h;
        int c = code;
        for (int v = 0; v < a; ++v) {
          h["N"][{{}, std::to_string(v)}] = std::to_string(c % b);
          c /= b;
        }
        if (check_hom(sig, nat_mod(a), nat_mod(b), h).ok()) ++homs;
      }
      EXPECT_EQ(homs, a % b == 0 ? 1 : 0) << a << " " << b;
    }
  }
}

TEST(Probe, ExistenceOnNatAndTwoSort) {
  Signature nat = corpus("nat");
  for (int k : {2, 3, 5}) {
    ProbeReport rep = initiality_probe(nat, nat_mod(k), std::nullopt, 8);
    EXPECT_TRUE(rep.existence_ok());
    EXPECT_EQ(rep.instances, 8u);
  }
  ProbeReport rep = initiality_probe(corpus("twosort"), data("twosort.json"), std::nullopt, 4);
  EXPECT_TRUE(rep.existence_ok());
  EXPECT_EQ(rep.instances, 2u);
}

TEST(Probe, FoldTableIsItsOwnWitness) {
  Signature sig = corpus("nat");
  ConcreteAlgebra a = nat_mod(3);
  Candidate cand;
  for (const auto& t : all_terms(enumerate(sig, 5))) cand[t->text] = fold(sig, a, *t);
  ProbeReport rep = initiality_probe(sig, a, cand, 5);
  EXPECT_TRUE(rep.candidate_hom.ok());
  EXPECT_TRUE(rep.uniqueness_ok());
  EXPECT_TRUE(rep.counterexamples.empty());
  EXPECT_EQ(rep.compared, 5u);
}

TEST(Probe, DeviationAtSucZero) {
  Signature sig = corpus("nat");
  ConcreteAlgebra a = nat_mod(3);
  Candidate cand;
  for (const auto& t : all_terms(enumerate(sig, 5))) cand[t->text] = fold(sig, a, *t);
  cand["suc zero"] = "2";
  ProbeReport rep = initiality_probe(sig, a, cand, 5);
  EXPECT_FALSE(rep.candidate_hom.ok());
  EXPECT_EQ(rep.counterexamples, std::vector<std::string>{"suc zero"});
}

TEST(Probe, ExhaustiveUniquenessOnNatModTwo) {
  Signature sig = corpus("nat");
  ConcreteAlgebra a = nat_mod(2);
  auto terms = all_terms(enumerate(sig, 6));
  Interpretation in(sig, a);
  int passing = 0;
  for (int code = 0; code < (1 << 6); ++code) {
    Candidate cand;
    for (std::size_t k = 0; k < terms.size(); ++k) cand[terms[k]->text] = std::to_string((code >> k) & 1);
    if (!check_candidate(in, terms, cand).ok()) continue;
    ++passing;
    for (const auto& t : terms) EXPECT_EQ(cand[t->text], fold(in, *t));
  }
  EXPECT_EQ(passing, 1);
}

TEST(Probe, RandomTablesPassingAgreeWithFold) {
  testgen::Rng rng(2026);
  std::vector<std::pair<Signature, ConcreteAlgebra>> cases;
  for (int k : {2, 3, 5}) cases.emplace_back(corpus("nat"), nat_mod(k));
  cases.emplace_back(corpus("twosort"), data("twosort.json"));
  for (const auto& sig : plain_signatures(20, 6)) {
    cases.emplace_back(sig, random_algebra(sig, rng));
  }
  std::size_t passing = 0, failing = 0;
  for (const auto& [sig, alg] : cases) {
    Interpretation in(sig, alg);
    auto terms = all_terms(enumerate(sig, 3));
    for (int k = 0; k < 50; ++k) {
      Candidate cand = random_candidate(in, terms, rng, k % 2 ? 1.0 : 0.9);
      ProbeReport rep = initiality_probe(sig, alg, cand, 3);
      if (rep.candidate_hom.ok()) {
        ++passing;
        EXPECT_TRUE(rep.counterexamples.empty()) << surface::print(sig);
      } else {
        ++failing;
      }
      EXPECT_TRUE(rep.uniqueness_ok());
    }
  }
  EXPECT_GT(passing, 100u);
  EXPECT_GT(failing, 10u);
}

TEST(Algebra, JsonRoundTrip) {
  for (int k : {2, 5}) {
    ConcreteAlgebra a = nat_mod(k);
    ConcreteAlgebra b = algebra_from_json(algebra_to_json(a));
    EXPECT_EQ(a.carriers, b.carriers);
    EXPECT_EQ(a.ops, b.ops);
  }
  ConcreteAlgebra two = data("twosort.json");
  ConcreteAlgebra back = algebra_from_json(algebra_to_json(two));
  EXPECT_EQ(two.carriers, back.carriers);
  EXPECT_EQ(two.ops, back.ops);
  EXPECT_THROW(algebra_from_json(nlohmann::json::parse("{\"ops\": {}}")), Error);
}

TEST(Algebra, ValidationRejectsOutOfSortResults) {
  Signature sig = corpus("twosort");
  ConcreteAlgebra a = data("twosort.json");
  EXPECT_NO_THROW(validate_algebra(sig, a));
  ConcreteAlgebra bad = a;
  bad.ops["b"][{"x"}] = "r";
  EXPECT_THROW(validate_algebra(sig, bad), Error);
  ConcreteAlgebra missing = a;
  missing.carriers["B"].erase({"y"});
  EXPECT_THROW(validate_algebra(sig, missing), Error);
}

}  // namespace
