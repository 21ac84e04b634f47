#include <algorithm>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracle.hpp"
#include "trg/aligner.hpp"
#include "trg/error.hpp"

using namespace trg;
using fixtures::F;

namespace {

std::vector<Span> spans(std::initializer_list<std::pair<std::size_t, std::size_t>> list) {
  std::vector<Span> out;
  for (auto [s, e] : list) out.push_back({s, e});
  return out;
}

const std::vector<AlignedSegment>& segments_of(const std::vector<AlignedInstance>& all, const std::string& id) {
  for (const auto& a : all)
    if (a.instance.id == id) return a.segments;
  throw std::runtime_error("missing " + id);
}

// Repeatedly unions any overlapping pair until none is left.
std::vector<AlignedSegment> naive_merge(std::vector<AlignedSegment> segs) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < segs.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < segs.size() && !changed; ++j) {
        if (!segs[i].span.overlaps(segs[j].span)) continue;
        segs[i].span = {std::min(segs[i].span.start, segs[j].span.start), std::max(segs[i].span.end, segs[j].span.end)};
        for (const auto& f : segs[j].features) segs[i].features.insert(f);
        segs.erase(segs.begin() + static_cast<std::ptrdiff_t>(j));
        changed = true;
      }
  }
  std::sort(segs.begin(), segs.end(), [](const auto& a, const auto& b) { return a.span < b.span; });
  return segs;
}

void check_partition(const AlignedInstance& a) {
  std::size_t at = 0;
  for (const auto& s : a.segments) {
    CHECK(s.span.start == at);
    CHECK(s.span.end > s.span.start);
    at = s.span.end;
  }
  CHECK(at == a.instance.tokens.size());
  for (std::size_t i = 1; i < a.segments.size(); ++i)
    CHECK_FALSE((a.segments[i].features.empty() && a.segments[i - 1].features.empty()));
}

}  // namespace

TEST_CASE("express and core on C4") {
  const auto t = CooccurrenceTable::build(fixtures::c4());
  CHECK(express("cheap", F("price=cheap"), t) == 1.0);
  CHECK(express("door cafe", F("name=red_door_cafe"), t) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(express(".", F("price=cheap"), t) == 0.0);
  CHECK(express("sushi", F("name=red_door_cafe"), t) == 0.0);
  CHECK(core("red door cafe", F("name=red_door_cafe"), t) == 1.0);
  CHECK(core("red door cafe is", F("name=red_door_cafe"), t) == 0.5);
  CHECK(weight("door cafe", F("name=red_door_cafe"), t) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(weight("not a fragment", F("price=cheap"), t) == 0.0);
  CHECK(weight("cheap", F("name=nowhere"), t) == 0.0);
}

TEST_CASE("express is zero when the feature is everywhere") {
  const Corpus c({make_instance("a", "x y", {F("k=v")}), make_instance("b", "x z", {F("k=v")})});
  const auto t = CooccurrenceTable::build(c);
  CHECK(express("x", F("k=v"), t) == 0.0);
  CHECK(weight("x y", F("k=v"), t) == 0.0);
}

TEST_CASE("values stay in range and match exact arithmetic") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const Corpus c = oracle::random_corpus(rng);
    const auto t = CooccurrenceTable::build(c);
    for (const auto& inst : c.instances())
      for (const auto& s : enumerate_fragments(inst).all()) {
        const auto w = oracle::slice(inst, s);
        for (const auto& g : c.feature_universe()) {
          const auto counts = oracle::count(c, w, g);
          const double e = express(join_tokens(w), g, t), k = core(join_tokens(w), g, t);
          CHECK(e >= 0.0);
          CHECK(e <= 1.0);
          CHECK(k >= 0.0);
          CHECK(k <= 1.0);
          CHECK(e == doctest::Approx(oracle::express(counts).value()).epsilon(1e-12));
          CHECK(k == doctest::Approx(oracle::core(counts).value()).epsilon(1e-12));
        }
      }
  }
}

TEST_CASE("core is anti-monotone under inclusion") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const Corpus c = oracle::random_corpus(rng);
    const auto t = CooccurrenceTable::build(c);
    for (const auto& inst : c.instances()) {
      const auto tri = enumerate_fragments(inst);
      for (const auto& outer : tri.all())
        for (const auto& inner : tri.all()) {
          if (!includes(outer, inner)) continue;
          for (const auto& g : c.feature_universe())
            CHECK(core(surface(outer, inst), g, t) <= core(surface(inner, inst), g, t));
        }
    }
  }
}

TEST_CASE("align_feature on C4") {
  const Corpus& c4 = fixtures::c4();
  const auto t = CooccurrenceTable::build(c4);
  CHECK(align_feature(c4[0], F("name=red_door_cafe"), t) == spans({{0, 3}}));
  CHECK(align_feature(c4[0], F("price=cheap"), t) == spans({{3, 6}}));
  CHECK(align_feature(c4[3], F("price=cheap"), t) == spans({{2, 5}}));
  CHECK(align_feature(c4[0], F("food=sushi"), t).empty());

  AlignConfig strict;
  strict.sigma = 1.0;
  CHECK(align_feature(c4[0], F("price=cheap"), t, strict) == spans({{3, 6}}));
  strict.validate();
  AlignConfig bad;
  bad.sigma = 1.01;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad.sigma = -0.1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("C4 alignment") {
  const auto aligned = align_corpus(fixtures::c4());
  REQUIRE(aligned.size() == 4);
  const auto& i1 = segments_of(aligned, "i1");
  REQUIRE(i1.size() == 2);
  CHECK(i1[0].span == Span{0, 3});
  CHECK(i1[0].features == FeatureCollection{F("name=red_door_cafe")});
  CHECK(i1[1].span == Span{3, 6});
  CHECK(i1[1].features == FeatureCollection{F("price=cheap")});
  // Everything else overlaps once merged, so the whole sentence is one segment.
  const auto& i3 = segments_of(aligned, "i3");
  REQUIRE(i3.size() == 1);
  CHECK(i3[0].features == FeatureCollection{F("name=red_door_cafe"), F("food=sushi")});
  for (const auto& a : aligned) check_partition(a);
}

TEST_CASE("airport names line up with their code") {
  const Corpus c({
      make_instance("a", "flights from boston to san francisco", {F("from=bos"), F("to=sfo")}),
      make_instance("b", "flights to san francisco", {F("to=sfo")}),
      make_instance("c", "flights from denver to boston", {F("from=den"), F("to=bos")}),
      make_instance("d", "show flights to denver", {F("to=den")}),
  });
  const auto t = CooccurrenceTable::build(c);
  CHECK(weight("san francisco", F("to=sfo"), t) == 1.0);
  const auto got = align_feature(c[1], F("to=sfo"), t);
  REQUIRE(got.size() == 1);
  CHECK(surface(got[0], c[1]).find("san francisco") != std::string::npos);
  CHECK(got == oracle::align_feature(c, c[1], F("to=sfo"), {1, 2}));
}

TEST_CASE("single instance corpus aligns nothing") {
  const auto aligned = align_corpus(Corpus({make_instance("x", "red door cafe is cheap .", {F("price=cheap")})}));
  REQUIRE(aligned.size() == 1);
  REQUIRE(aligned[0].segments.size() == 1);
  CHECK(aligned[0].segments[0].span == Span{0, 6});
  CHECK(aligned[0].segments[0].features.empty());
}

TEST_CASE("maxima are flagged against every comparable fragment") {
  FragmentTriangle tri("x", 3);
  // index order: [0,1) [1,2) [2,3) [0,2) [1,3) [0,3)
  const std::vector<double> v = {0.2, 0.9, 0.1, 0.5, 0.9, 0.3};
  CHECK(maxima(tri, v) == std::vector<bool>{false, true, false, false, true, false});
  // Immediately, [0,1) only meets [0,2) and beats it; [0,3) lies out of reach.
  // [2,3) ties with [1,3), its only immediate neighbour.
  CHECK(maxima(tri, {0.6, 0.1, 0.1, 0.5, 0.1, 0.7}, Neighbourhood::immediate) ==
        std::vector<bool>{true, false, true, false, false, true});
  CHECK(maxima(tri, {0.6, 0.1, 0.1, 0.5, 0.1, 0.7}) == std::vector<bool>{false, false, false, false, false, true});
}

TEST_CASE("overlapping fragments merge") {
  const FeatureCollection hint{F("a=1"), F("b=1"), F("c=1")};
  const auto merged = merge_overlapping({{{0, 5}, {F("a=1")}}, {{3, 6}, {F("b=1")}}}, hint);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].span == Span{0, 6});
  CHECK(merged[0].features.keys() == std::vector<std::string>{"a=1", "b=1"});

  // A chain of overlaps collapses to one span; touching spans stay apart.
  const auto chain = merge_overlapping(
      {{{4, 7}, {F("c=1")}}, {{0, 2}, {F("a=1")}}, {{1, 5}, {F("b=1")}}, {{7, 8}, {F("a=1")}}}, hint);
  REQUIRE(chain.size() == 2);
  CHECK(chain[0].span == Span{0, 7});
  CHECK(chain[0].features.keys() == std::vector<std::string>{"a=1", "b=1", "c=1"});
  CHECK(chain[1].span == Span{7, 8});

  const auto segs = segment(chain, 10);
  REQUIRE(segs.size() == 3);
  CHECK(segs[2].span == Span{8, 10});
  CHECK(segs[2].features.empty());
}

TEST_CASE("merging matches a naive fixpoint in any order") {
  std::mt19937_64 rng(21);
  const FeatureCollection hint{F("a=0"), F("a=1"), F("a=2"), F("a=3")};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<AlignedSegment> in;
    const std::size_t count = std::uniform_int_distribution<std::size_t>(0, 6)(rng);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t s = std::uniform_int_distribution<std::size_t>(0, 9)(rng);
      const std::size_t e = std::uniform_int_distribution<std::size_t>(s + 1, 10)(rng);
      in.push_back({{s, e}, {F("a=" + std::to_string(i % 4))}});
    }
    const auto expected = naive_merge(in);
    std::shuffle(in.begin(), in.end(), rng);
    const auto got = merge_overlapping(in, hint);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].span == expected[i].span);
      CHECK(got[i].features == expected[i].features);
    }
  }
}

TEST_CASE("alignment agrees with the brute-force reference") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const Corpus c = oracle::random_corpus(rng, 7);
    const auto t = CooccurrenceTable::build(c);
    for (const auto& inst : c.instances())
      for (const auto& g : inst.cc) CHECK(align_feature(inst, g, t) == oracle::align_feature(c, inst, g, {1, 2}));
    for (const auto& a : align_corpus(c)) check_partition(a);
  }
}

TEST_CASE("parallel alignment is identical to sequential") {
  std::mt19937_64 rng(41);
  const Corpus c = oracle::random_corpus(rng);
  CHECK(align_corpus(c, {}, 1) == align_corpus(c, {}, 4));
}

TEST_CASE("aligned serialization round trip") {
  const auto aligned = align_corpus(fixtures::c4());
  const auto back = parse_aligned(serialize_aligned(aligned));
  REQUIRE(back.size() == aligned.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].instance.id == aligned[i].instance.id);
    CHECK(back[i].instance.tokens == aligned[i].instance.tokens);
    CHECK(back[i].segments == aligned[i].segments);
  }
  CHECK_THROWS(parse_aligned(R"({"id":"x","tokens":["a","b"],"cc":[],"segments":[{"start":0,"end":1,"features":[]}]})"));
}
