#include "vai/detector_eval.hpp"
#include "vai/error.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

namespace vai {
namespace {

PredictionRecord rec(std::string id, Truth truth, double score, std::string det = "d", std::string cohort = "g") {
    return {std::move(id), truth, score, std::nullopt, std::move(det), std::move(cohort), 0};
}

std::vector<PredictionRecord> balanced(int n_real, int n_fake, double real_score, double fake_score) {
    std::vector<PredictionRecord> r;
    for (int i = 0; i < n_real; ++i) r.push_back(rec("r" + std::to_string(i), Truth::Real, real_score));
    for (int i = 0; i < n_fake; ++i) r.push_back(rec("f" + std::to_string(i), Truth::Fake, fake_score));
    return r;
}

TEST(Confusion, PerfectDetector) {
    const auto cm = confusion(balanced(10, 10, 0.1, 0.9));
    EXPECT_EQ(cm, (ConfusionMatrix{10, 0, 10, 0}));
}

TEST(Confusion, AllFakePredictor) {
    const auto cm = confusion(balanced(100, 100, 0.9, 0.9));
    EXPECT_EQ(cm.tp, 100u);
    EXPECT_EQ(cm.fp, 100u);
}

TEST(Confusion, ThresholdIsClosedOnTheLeft) {
    const std::vector<PredictionRecord> r = {rec("a", Truth::Fake, 0.4), rec("b", Truth::Fake, 0.5),
                                             rec("c", Truth::Fake, 0.6)};
    const auto cm = confusion(r, 0.5);
    EXPECT_EQ(cm.tp, 2u);
    EXPECT_EQ(cm.fn, 1u);
}

TEST(Confusion, HardLabelsPassThrough) {
    PredictionRecord a{"a", Truth::Real, std::nullopt, Truth::Fake, "d", "g", 3};
    PredictionRecord b{"b", Truth::Fake, std::nullopt, Truth::Fake, "d", "g", 4};
    const auto cm = confusion(std::vector{a, b});
    EXPECT_EQ(cm, (ConfusionMatrix{1, 1, 0, 0}));
}

TEST(Confusion, MissingScoreAndLabelNamesLine) {
    PredictionRecord a{"a", Truth::Real, std::nullopt, std::nullopt, "d", "g", 7};
    try {
        confusion(std::vector{a});
        FAIL();
    } catch (const ManifestError& e) {
        EXPECT_EQ(e.line(), 7u);
    }
}

TEST(Metrics, Examples) {
    const auto all_fake = metrics({100, 100, 0, 0});
    EXPECT_EQ(format_percent(all_fake.acc), "50.00");
    EXPECT_EQ(format_percent(all_fake.recall), "100.00");
    EXPECT_EQ(format_percent(all_fake.precision), "50.00");

    const auto perfect = metrics({10, 0, 10, 0});
    EXPECT_EQ(perfect.acc, 100.0);
    EXPECT_EQ(*perfect.recall, 100.0);
    EXPECT_EQ(*perfect.precision, 100.0);

    const auto m = metrics({80, 10, 90, 20});
    EXPECT_EQ(format_percent(m.acc), "85.00");
    EXPECT_EQ(format_percent(m.recall), "80.00");
    EXPECT_EQ(format_percent(m.precision), "88.89");
}

TEST(Metrics, UndefinedRatiosAreNa) {
    const auto m = metrics({0, 0, 5, 0});
    EXPECT_FALSE(m.recall.has_value());
    EXPECT_FALSE(m.precision.has_value());
    EXPECT_EQ(format_percent(m.recall), "n/a");
    EXPECT_EQ(m.acc, 100.0);
    EXPECT_THROW(metrics({0, 0, 0, 0}), EmptyInputError);
}

TEST(FormatPercent, HalfUp) {
    EXPECT_EQ(format_percent(12.345), "12.35");
    EXPECT_EQ(format_percent(0.0), "0.00");
    EXPECT_EQ(format_percent(100.0), "100.00");
    EXPECT_EQ(format_percent(200.0 / 3.0), "66.67");
}

TEST(Properties, PermutationComplementAndMonotoneRecall) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        std::vector<PredictionRecord> r;
        for (int i = 0; i < 60; ++i) r.push_back(rec(std::to_string(i), u(rng) < 0.5 ? Truth::Real : Truth::Fake, u(rng)));
        if (std::none_of(r.begin(), r.end(), [](const auto& x) { return x.truth == Truth::Fake; })) continue;

        const auto base = metrics(confusion(r));
        std::shuffle(r.begin(), r.end(), rng);
        const auto shuffled = metrics(confusion(r));
        EXPECT_EQ(base.acc, shuffled.acc);
        EXPECT_EQ(base.recall, shuffled.recall);
        EXPECT_EQ(base.precision, shuffled.precision);

        auto all = r;
        auto none = r;
        for (auto& x : all) x.score = 1.0;
        for (auto& x : none) x.score = 0.0;
        EXPECT_DOUBLE_EQ(metrics(confusion(all)).acc + metrics(confusion(none)).acc, 100.0);

        double prev = 101.0;
        for (double th = 0.0; th <= 1.0; th += 0.05) {
            const double rc = *metrics(confusion(r, th)).recall;
            EXPECT_LE(rc, prev);
            prev = rc;
        }
    }
}

TEST(Parse, AnyColumnOrderAndHardLabels) {
    const auto r = parse_predictions(
        "cohort,detector,score,truth,image_id,extra\n"
        "sd3,cnn,0.7,fake,a.png,x\n"
        "real,cnn,real,real,b.png,y\n");
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0].image_id, "a.png");
    EXPECT_EQ(*r[0].score, 0.7);
    EXPECT_EQ(r[0].line, 2u);
    EXPECT_FALSE(r[1].score.has_value());
    EXPECT_EQ(*r[1].hard_label, Truth::Real);
}

TEST(Parse, BadHeaderNamesMissingColumns) {
    try {
        parse_predictions("image_id,truth,detector\n");
        FAIL();
    } catch (const ManifestError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("score"), std::string::npos);
        EXPECT_NE(msg.find("cohort"), std::string::npos);
    }
}

TEST(Parse, MalformedRowsCarryLineNumbers) {
    try {
        parse_predictions("image_id,truth,score,detector,cohort\na,fake,0.5,d,g\nb,maybe,0.5,d,g\n");
        FAIL();
    } catch (const ManifestError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse_predictions("image_id,truth,score,detector,cohort\na,fake,,d,g\n"), ManifestError);
    EXPECT_THROW(parse_predictions("image_id,truth,score,detector,cohort\na,fake,1.5,d,g\n"), ManifestError);
}

std::vector<PredictionRecord> two_by_two() {
    // Shared real set of 4 per detector; 4 fakes per (detector, cohort).
    std::vector<PredictionRecord> r;
    for (const std::string d : {"A", "B"}) {
        for (int i = 0; i < 4; ++i) r.push_back(rec("r" + std::to_string(i), Truth::Real, d == "A" ? 0.1 * i : 0.9, d, "real"));
        for (const std::string g : {"g1", "g2"}) {
            for (int i = 0; i < 4; ++i) {
                const double s = g == "g1" ? 0.8 : (i < 2 ? 0.9 : 0.2);
                r.push_back(rec(g + "_" + std::to_string(i), Truth::Fake, s, d, g));
            }
        }
    }
    return r;
}

TEST(EvalTable, TwoByTwoHandComputed) {
    const EvalTable t = eval_table(two_by_two(), {}, {});
    ASSERT_EQ(t.detectors, (std::vector<std::string>{"A", "B"}));
    ASSERT_EQ(t.cohorts, (std::vector<std::string>{"g1", "g2"}));
    // A: reals 0,0.1,0.2,0.3 all < 0.5 -> tn 4.
    EXPECT_EQ(t.cell(0, 0).cm, (ConfusionMatrix{4, 0, 4, 0}));
    EXPECT_EQ(t.cell(0, 1).cm, (ConfusionMatrix{2, 0, 4, 2}));
    // B: reals all 0.9 -> fp 4.
    EXPECT_EQ(t.cell(1, 0).cm, (ConfusionMatrix{4, 4, 0, 0}));
    EXPECT_EQ(t.cell(1, 1).cm, (ConfusionMatrix{2, 4, 0, 2}));
    EXPECT_EQ(t.cell(1, 1).n_real, 4u);
    EXPECT_EQ(t.cell(1, 1).n_fake, 4u);
    EXPECT_EQ(format_percent(t.cell(1, 1).metrics().precision), "33.33");
}

TEST(EvalTable, PerDetectorThreshold) {
    EvalOptions opt;
    opt.thresholds["B"] = 0.95;
    const EvalTable t = eval_table(two_by_two(), {}, {}, opt);
    EXPECT_EQ(t.cell(1, 0).threshold, 0.95);
    EXPECT_EQ(t.cell(1, 0).cm, (ConfusionMatrix{0, 0, 4, 4}));
}

TEST(EvalTable, CoverageAndDuplicates) {
    auto r = two_by_two();
    EXPECT_THROW(eval_table(r, {"A", "C"}, {}), CoverageError);
    EXPECT_THROW(eval_table(r, {}, {"g1", "g9"}), CoverageError);

    // A cohort with only real records under its own name has no fakes.
    r.push_back(rec("z", Truth::Real, 0.1, "A", "g3"));
    EXPECT_THROW(eval_table(r, {}, {}), CoverageError);
    EvalOptions gaps;
    gaps.allow_gaps = true;
    const EvalTable t = eval_table(r, {}, {}, gaps);
    EXPECT_TRUE(t.cell(0, 2).missing);
    EXPECT_NE(emit_eval_csv(t).find("missing"), std::string::npos);

    auto dup = two_by_two();
    dup.push_back(dup.front());
    EXPECT_THROW(eval_table(dup, {}, {}), ManifestError);
}

TEST(EvalTable, CsvRoundTrip) {
    const EvalTable t = eval_table(two_by_two(), {}, {});
    const std::string csv = emit_eval_csv(t);
    const EvalTable back = parse_eval_csv(csv);
    EXPECT_EQ(back.detectors, t.detectors);
    EXPECT_EQ(back.cohorts, t.cohorts);
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        EXPECT_EQ(back.cells[i].cm, t.cells[i].cm);
        EXPECT_EQ(back.cells[i].threshold, t.cells[i].threshold);
        EXPECT_EQ(back.cells[i].n_real, t.cells[i].n_real);
    }
    EXPECT_EQ(emit_eval_csv(back), csv);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "detector,cohort,threshold,n_real,n_fake,tp,fp,tn,fn,acc,recall,precision");
}

TEST(EvalTable, HeatmapLayout) {
    const std::string h = emit_accuracy_heatmap_csv(eval_table(two_by_two(), {}, {}));
    EXPECT_EQ(h, "detector,g1,g2\nA,100.00,75.00\nB,50.00,25.00\n");
}

}  // namespace
}  // namespace vai
