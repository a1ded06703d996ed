#include "isoscope/experiments.hpp"
#include "isoscope/errors.hpp"
#include "isoscope/rng.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace isoscope {

namespace {

std::string display_name(const Treebank& train, const Treebank& test) {
    return !train.name.empty() ? train.name : test.name;
}

} // namespace

std::vector<DepTree> treebank_trees(const Treebank& tb) {
    std::vector<DepTree> trees;
    trees.reserve(tb.size());
    for (std::size_t i = 0; i < tb.size(); ++i) {
        try {
            trees.push_back(build_tree(tb.sentences[i]));
        } catch (const TreeError& e) {
            std::ostringstream os;
            os << "treebank '" << tb.name << "' sentence " << i + 1 << ": " << e.what();
            throw TreeError(os.str());
        }
    }
    return trees;
}

TreebankRecord summarize_treebank(const Treebank& train, const Treebank& test_gold,
                                  const Treebank& test_pred, bool exact_deprel) {
    if (train.empty()) throw EmptySubsetError("summarize_treebank: empty training treebank");
    if (test_gold.empty()) throw EmptySubsetError("summarize_treebank: empty test treebank");

    auto train_trees = treebank_trees(train);
    auto test_trees = treebank_trees(test_gold);
    double dug_v = dug(iso_class_set(train_trees, IsoMode::Directed), test_trees);
    double uug_v = uug(iso_class_set(train_trees, IsoMode::Undirected), test_trees);
    LasResult las_r = las(test_gold, test_pred, exact_deprel);

    return make_record(display_name(train, test_gold),
                       static_cast<long long>(train.size()), mean_test_length(test_gold),
                       dug_v, las_r.score, uug_v);
}

DugReport dug_report(const Treebank& train, const Treebank& test, IsoMode mode,
                     std::optional<std::pair<int, int>> lengths) {
    const Treebank* tr = &train;
    const Treebank* te = &test;
    Treebank ftrain, ftest;
    if (lengths) {
        ftrain = filter_by_length(train, lengths->first, lengths->second);
        ftest = filter_by_length(test, lengths->first, lengths->second);
        tr = &ftrain;
        te = &ftest;
    }
    if (te->empty())
        throw EmptySubsetError(lengths ? "no test sentences in the requested length range"
                                       : "empty test treebank");

    auto train_trees = treebank_trees(*tr);
    auto test_trees = treebank_trees(*te);
    IsoClassSet shapes = iso_class_set(train_trees, mode);
    DugReport rep;
    rep.n_train = tr->size();
    rep.n_test = te->size();
    rep.n_train_shapes = shapes.size();
    rep.value = mode == IsoMode::Directed ? dug(shapes, test_trees) : uug(shapes, test_trees);
    return rep;
}

std::vector<CorrelationRow> correlation_block(const std::vector<TreebankRecord>& records,
                                              const std::string& x,
                                              const std::vector<std::string>& targets,
                                              PValueMethod method) {
    std::vector<CorrelationRow> rows;
    Series xs = feature_series(records, x);
    for (const std::string& target : targets) {
        Series ys = feature_series(records, target);
        rows.push_back(CorrelationRow{x, target, {}, spearman(xs, ys, method)});
    }
    return rows;
}

std::vector<CorrelationRow> correlation_table(const std::vector<TreebankRecord>& records,
                                              PValueMethod method) {
    if (records.size() < 5) throw StatsError("correlation_table needs at least 5 records");
    std::vector<CorrelationRow> rows;
    for (const char* x : {"train_size", "dug", "mean_test_len"}) {
        auto block = correlation_block(records, x, {"las"}, method);
        rows.insert(rows.end(), block.begin(), block.end());
    }
    for (const char* x : {"train_size", "mean_test_len"}) {
        auto block = correlation_block(records, x, {"dug"}, method);
        rows.insert(rows.end(), block.begin(), block.end());
    }
    return rows;
}

std::vector<std::vector<std::string>> standard_feature_sets(const std::string& size_feature,
                                                            const std::string& dug_feature) {
    return {
        {size_feature},
        {size_feature, dug_feature},
        {size_feature, "mean_test_len"},
        {size_feature, dug_feature, "mean_test_len"},
    };
}

std::vector<CvCell> cv_table(const std::vector<TreebankRecord>& records,
                             const std::vector<std::vector<std::string>>& feature_sets,
                             CvMode mode, int k, const std::vector<std::uint64_t>& seeds) {
    if (records.size() < 2 * static_cast<std::size_t>(k))
        throw StatsError("cv_table needs at least 2k records");
    if (mode == CvMode::MultiSeed && seeds.empty())
        throw StatsError("cv_table multiseed mode needs at least one seed");
    Series y = feature_series(records, "las");
    std::vector<CvCell> cells;
    for (const auto& names : feature_sets) {
        std::vector<Series> X;
        std::string label;
        for (const std::string& f : names) {
            X.push_back(feature_series(records, f));
            if (!label.empty()) label += '+';
            label += f;
        }
        double value = 0.0;
        if (mode == CvMode::Original) {
            value = kfold_cv_explained_variance(X, y, k, /*shuffle=*/false, 0);
        } else {
            for (std::uint64_t s : seeds)
                value += kfold_cv_explained_variance(X, y, k, /*shuffle=*/true, s);
            value /= static_cast<double>(seeds.size());
        }
        cells.push_back(CvCell{label, value});
    }
    return cells;
}

std::vector<BinRecord> length_binned_analysis(const Treebank& train, const Treebank& test_gold,
                                              const Treebank& test_pred, int lo, int hi,
                                              bool exact_deprel) {
    std::map<int, std::vector<DepTree>> train_by_len;
    for (const Sentence& s : train.sentences) {
        int len = sentence_length(s);
        if (len >= lo && len <= hi) train_by_len[len].push_back(build_tree(s));
    }
    std::map<int, std::vector<DepTree>> test_by_len;
    for (const Sentence& s : test_gold.sentences) {
        int len = sentence_length(s);
        if (len >= lo && len <= hi) test_by_len[len].push_back(build_tree(s));
    }

    std::string name = display_name(train, test_gold);
    std::vector<BinRecord> bins;
    for (int len = lo; len <= hi; ++len) {
        BinRecord bin;
        bin.name = name;
        bin.length = len;
        auto tr = train_by_len.find(len);
        auto te = test_by_len.find(len);
        bin.n_train_l = tr == train_by_len.end() ? 0 : static_cast<long long>(tr->second.size());
        bin.n_test_l = te == test_by_len.end() ? 0 : static_cast<long long>(te->second.size());
        if (bin.n_test_l > 0) {
            IsoClassSet shapes =
                tr == train_by_len.end()
                    ? IsoClassSet{IsoMode::Directed, {}}
                    : iso_class_set(tr->second, IsoMode::Directed);
            bin.dug_l = dug(shapes, te->second);
            auto las_r = las_for_lengths(test_gold, test_pred, len, len, exact_deprel);
            bin.las_l = las_r ? std::optional<double>(las_r->score) : std::nullopt;
        }
        bins.push_back(std::move(bin));
    }
    return bins;
}

double focused_dug(const Treebank& train, const Treebank& test, int lo, int hi) {
    return dug_report(train, test, IsoMode::Directed, std::make_pair(lo, hi)).value;
}

BackgroundResult background_subtract(const std::vector<TreebankRecord>& records,
                                     bool use_log_size, PValueMethod method) {
    if (records.size() < 10) throw StatsError("background_subtract needs at least 10 records");
    Series las_s = feature_series(records, "las");
    Series size_s = feature_series(records, use_log_size ? "log_size" : "train_size");
    Series ltest = feature_series(records, "mean_test_len");
    Series dug_s = feature_series(records, "dug");

    auto normalize = [&](const Series& target, const Series& feature,
                         const std::string& out_name) {
        RegressionFit fit = ols_fit({feature}, target);
        Series pred = predict(fit, {feature});
        Series out;
        out.name = out_name;
        out.values.reserve(target.size());
        for (std::size_t i = 0; i < target.size(); ++i) {
            if (pred.values[i] <= 0.0)
                throw StatsError("background fit against '" + feature.name +
                                 "' predicts a nonpositive value for record '" +
                                 records[i].name + "'");
            out.values.push_back(target.values[i] / pred.values[i]);
        }
        return out;
    };

    BackgroundResult res;
    res.normalized_las = normalize(las_s, size_s, "las_norm_size");
    res.doubly_normalized = normalize(res.normalized_las, ltest, "las_norm_size_ltest");
    res.report = {
        CorrelationRow{"dug", "las", {}, spearman(dug_s, las_s, method)},
        CorrelationRow{"dug", "las_norm_size", {}, spearman(dug_s, res.normalized_las, method)},
        CorrelationRow{"mean_test_len", "las_norm_size", {},
                       spearman(ltest, res.normalized_las, method)},
        CorrelationRow{"dug", "las_norm_size_ltest", {},
                       spearman(dug_s, res.doubly_normalized, method)},
    };
    return res;
}

std::vector<CorrelationRow> partial_corr_table(const std::vector<TreebankRecord>& records,
                                               const std::string& x, const std::string& y,
                                               PValueMethod method) {
    if (records.size() < 8) throw StatsError("partial_corr_table needs at least 8 records");
    Series xs = feature_series(records, x);
    Series ys = feature_series(records, y);
    Series size_s = feature_series(records, "log_size");
    Series ltest = feature_series(records, "mean_test_len");

    std::vector<CorrelationRow> rows;
    rows.push_back(CorrelationRow{x, y, {}, spearman(xs, ys, method)});
    rows.push_back(CorrelationRow{x, y, {"log_size"}, partial_spearman(xs, ys, {size_s})});
    rows.push_back(CorrelationRow{x, y, {"mean_test_len"}, partial_spearman(xs, ys, {ltest})});
    rows.push_back(
        CorrelationRow{x, y, {"log_size", "mean_test_len"},
                       partial_spearman(xs, ys, {size_s, ltest})});
    return rows;
}

ControlledSplit sample_controlled_splits(const Treebank& pool, int length, int train_n,
                                         int test_n, int min_pool, std::uint64_t seed) {
    if (train_n < 1 || test_n < 1)
        throw StatsError("sample_controlled_splits: train and test sizes must be >= 1");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (sentence_length(pool.sentences[i]) == length) idx.push_back(i);

    std::size_t m = idx.size();
    std::size_t need = std::max<std::size_t>(static_cast<std::size_t>(min_pool),
                                             static_cast<std::size_t>(train_n));
    if (m < need) {
        std::ostringstream os;
        os << "pool '" << pool.name << "' has " << m << " sentences of length " << length
           << "; need at least " << need;
        throw InsufficientPoolError(os.str());
    }

    SplitMix64 gen(seed);
    fisher_yates(idx, gen);

    ControlledSplit split;
    split.source_name = pool.name;
    split.seed = seed;
    split.train.name = pool.name + "-train";
    for (int i = 0; i < train_n; ++i)
        split.train.sentences.push_back(pool.sentences[idx[static_cast<std::size_t>(i)]]);

    std::size_t remaining = m - static_cast<std::size_t>(train_n);
    std::size_t n_tests = remaining / static_cast<std::size_t>(test_n);
    for (std::size_t t = 0; t < n_tests; ++t) {
        Treebank test;
        test.name = pool.name + "-test_" + std::to_string(t);
        std::size_t base = static_cast<std::size_t>(train_n) + t * static_cast<std::size_t>(test_n);
        for (int i = 0; i < test_n; ++i)
            test.sentences.push_back(pool.sentences[idx[base + static_cast<std::size_t>(i)]]);
        split.tests.push_back(std::move(test));
    }
    return split;
}

} // namespace isoscope
