#include "seuvote/fixtures.hpp"
#include "seuvote/rng.hpp"
#include "seuvote/specfmt.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

using namespace seuvote;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(std::string_view s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')) + 1; }

const std::map<std::string, std::string> kFixtureFiles{
    {"reunion-phi", "reunion_phi.scf"}, {"reunion-phi-prime", "reunion_phi_prime.scf"},
    {"example2", "example2.scf"},       {"example3", "example3.scf"},
    {"example4ii", "example4ii.scf"},
};

}  // namespace

TEST(SpecFormat, FixturesRoundTrip) {
    for (const auto& name : fixtures::mechanism_names()) {
        const Mechanism m = fixtures::mechanism(name);
        const std::string text = serialize(m);
        const auto again = parse_spec(text);
        ASSERT_TRUE(again.ok()) << name << ": " << again.errors.front().message();
        EXPECT_EQ(again.document->mechanism, m) << name;
        EXPECT_EQ(serialize(again.document->mechanism), text) << name;
    }
}

TEST(SpecFormat, ShippedFilesMatchCompiledFixtures) {
    for (const auto& [name, file] : kFixtureFiles) {
        const auto r = parse_spec(slurp(std::string(SEUVOTE_SOURCE_DIR) + "/fixtures/" + file));
        ASSERT_TRUE(r.ok()) << file;
        EXPECT_EQ(r.document->mechanism, fixtures::mechanism(name)) << file;
    }
    const auto filters = parse_filters(slurp(std::string(SEUVOTE_SOURCE_DIR) + "/fixtures/example1_filters.scf"));
    ASSERT_TRUE(filters.ok());
    EXPECT_EQ(filters.document->filters.size(), 3U);
    EXPECT_EQ(serialize(*filters.document), serialize(fixtures::example1_filters()));
}

TEST(SpecFormat, FilterDocumentRoundTrip) {
    const auto doc = fixtures::example1_filters();
    const auto r = parse_filters(serialize(doc));
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.document->filters.size(), doc.filters.size());
    for (std::size_t i = 0; i < doc.filters.size(); ++i) {
        EXPECT_EQ(r.document->filters[i].name, doc.filters[i].name);
        EXPECT_EQ(r.document->filters[i].filter, doc.filters[i].filter);
    }
}

TEST(SpecFormat, LocationsAreRecorded) {
    const auto r = parse_spec(fixtures::spec_text("reunion-phi"));
    ASSERT_TRUE(r.ok());
    const auto& doc = *r.document;
    EXPECT_EQ(doc.cell_locations.at("C2").column, 6);  // the name, not the keyword
    EXPECT_LT(doc.cell_locations.at("C1").line, doc.cell_locations.at("C2").line);
    EXPECT_LT(doc.cell_locations.at("C2").line, doc.factor_locations.at("C1").line);
}

TEST(SpecFormat, MissingVotersReportedWhereHeaderEnds) {
    const auto r = parse_spec(slurp(std::string(SEUVOTE_SOURCE_DIR) + "/tests/data/missing_voters.scf"));
    EXPECT_FALSE(r.ok());
    ASSERT_FALSE(r.errors.empty());
    EXPECT_EQ(r.errors.front().where, (SourceLocation{3, 1}));
    EXPECT_NE(r.errors.front().expected.find("voters"), std::string::npos);
}

TEST(SpecFormat, DuplicateCellIsAnError) {
    const auto r = parse_spec("states: x y\noutcomes: a b\nvoters: 3\ncell C: x\ncell C: y\nfactor C: constant c=a\n");
    EXPECT_FALSE(r.ok());
    ASSERT_FALSE(r.errors.empty());
    EXPECT_EQ(r.errors.front().where.line, 5);
}

TEST(SpecFormat, UnknownLabelIsLocated) {
    const auto r = parse_spec("states: x y\noutcomes: a b\nvoters: 3\ncell C: x q\nfactor C: constant c=a\n");
    EXPECT_FALSE(r.ok());
    ASSERT_FALSE(r.errors.empty());
    EXPECT_EQ(r.errors.front().where, (SourceLocation{4, 11}));
    EXPECT_EQ(r.errors.front().found, "'q'");
}

TEST(SpecFormat, SeveralErrorsAreCollected) {
    const auto r = parse_spec("states: x y\noutcomes: a b\nvoters: 3\ncell C: x z\ncell D: y\nfactor C: constant c=zz\nfactor D: simple a=a\n");
    EXPECT_FALSE(r.ok());
    EXPECT_GE(r.errors.size(), 2U);
}

TEST(SpecFormat, ZeroQuotaParsesAndFailsValidation) {
    const auto r = parse_spec(slurp(std::string(SEUVOTE_SOURCE_DIR) + "/tests/data/kbar_zero.scf"));
    ASSERT_TRUE(r.ok());
    const auto d = validate_mechanism(r.document->mechanism);
    ASSERT_FALSE(d.empty());
    EXPECT_EQ(d.front().kind, "quota");
}

TEST(SpecFormat, TableThresholdRoundTrips) {
    const std::string text =
        "states: c s\noutcomes: B P\nvoters: 2\ncell C: c s\n"
        "factor C: dyadic a=B b=P E={c} F={s} klo=1 khi=2 H=table[0 0 1; 0 1 1; 1 1 1]\n";
    const auto r = parse_spec(text);
    ASSERT_TRUE(r.ok()) << r.errors.front().message();
    const auto out = serialize(r.document->mechanism);
    EXPECT_NE(out.find("H=table[0 0 1; 0 1 1; 1 1 1]"), std::string::npos) << out;
    EXPECT_EQ(parse_spec(out).document->mechanism, r.document->mechanism);
}

TEST(SpecFormat, CommentsAndContinuationLines) {
    const std::string text =
        "# leading comment\nstates: x y z   # trailing\noutcomes: a b\nvoters: 3\ncell C: x y z\n"
        "factor C: filtering a=a b=b\n  klo=1 khi=1\n  level 1: pairs=({x},{y}) Ga={} Gb={z}\n    quotas=(ttilde=1,that=2)\n";
    const auto r = parse_spec(text);
    ASSERT_TRUE(r.ok()) << r.errors.front().message();
    const auto& f = std::get<FilteringFactor>(r.document->mechanism.cells[0].factor);
    EXPECT_EQ(f.filter.levels.size(), 1U);
    EXPECT_EQ(f.quota(1, 0).that, 2);
}

TEST(SpecFormat, MutatedInputNeverThrowsAndErrorsStayInside) {
    const std::string base(fixtures::spec_text("example3"));
    const std::string alphabet = "{}()[],;|:= \n#abw1234567xyz";
    Rng rng(77);
    for (int i = 0; i < 2000; ++i) {
        std::string s = base;
        const int edits = static_cast<int>(rng.uniform(1, 6));
        for (int e = 0; e < edits && !s.empty(); ++e) {
            const auto pos = static_cast<std::size_t>(rng.uniform(0, static_cast<long>(s.size()) - 1));
            switch (rng.uniform(0, 2)) {
            case 0: s.erase(pos, 1); break;
            case 1: s.insert(pos, 1, alphabet[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(alphabet.size()) - 1))]); break;
            default: s[pos] = alphabet[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(alphabet.size()) - 1))];
            }
        }
        ParseResult r;
        ASSERT_NO_THROW(r = parse_spec(s)) << s;
        const int lines = count_lines(s);
        for (const auto& err : r.errors) {
            EXPECT_GE(err.where.line, 1);
            EXPECT_LE(err.where.line, lines);
        }
        if (r.ok()) EXPECT_NO_THROW((void)validate_mechanism(r.document->mechanism));
    }
}
