// isoscope command-line interface.
//
// Exit codes: 0 success, 2 parse error, 3 empty subset, 4 alignment
// error, 5 insufficient pool, 1 anything else.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "isoscope/errors.hpp"
#include "isoscope/experiments.hpp"
#include "isoscope/manifest.hpp"
#include "isoscope/reports.hpp"
#include "isoscope/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace isoscope;

namespace {

unsigned worker_count(std::size_t n_tasks) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("ISOSCOPE_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) hw = static_cast<unsigned>(v);
    }
    if (n_tasks < hw) hw = static_cast<unsigned>(n_tasks);
    return hw == 0 ? 1 : hw;
}

// Runs fn(0..n-1) across workers; outputs must be written to per-index
// slots so results do not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned workers = worker_count(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::optional<std::pair<int, int>> parse_length_range(const std::string& spec) {
    if (spec.empty()) return std::nullopt;
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw CLI::ValidationError("--lengths", "expected LO:HI, got '" + spec + "'");
    try {
        int lo = std::stoi(spec.substr(0, colon));
        int hi = std::stoi(spec.substr(colon + 1));
        if (lo < 1 || hi < lo)
            throw CLI::ValidationError("--lengths", "need 1 <= LO <= HI");
        return std::make_pair(lo, hi);
    } catch (const std::invalid_argument&) {
        throw CLI::ValidationError("--lengths", "expected LO:HI, got '" + spec + "'");
    }
}

IsoMode parse_mode(const std::string& mode) {
    if (mode == "directed") return IsoMode::Directed;
    if (mode == "undirected") return IsoMode::Undirected;
    throw CLI::ValidationError("--mode", "expected directed or undirected");
}

json manifest_json(const RunManifest& m) { return json::parse(m.to_json()); }

void emit_line(const json& j) { std::cout << j.dump() << "\n"; }

// ---------------------------------------------------------------- dug

struct DugArgs {
    std::string train_path, test_path;
    std::string mode = "directed";
    std::string lengths;
    bool exclude_punct = false;
};

int run_dug(const DugArgs& a) {
    Treebank train = read_conllu_file(a.train_path);
    Treebank test = read_conllu_file(a.test_path);
    if (a.exclude_punct) {
        train = exclude_punct(train);
        test = exclude_punct(test);
    }
    auto range = parse_length_range(a.lengths);
    DugReport rep = dug_report(train, test, parse_mode(a.mode), range);

    RunManifest m = make_manifest(
        "dug",
        {{"train", a.train_path},
         {"test", a.test_path},
         {"mode", a.mode},
         {"lengths", a.lengths},
         {"exclude_punct", a.exclude_punct ? "true" : "false"}},
        {a.train_path, a.test_path}, {});
    json out{{"dug", round_sig6(rep.value)},
             {"n_train", rep.n_train},
             {"n_test", rep.n_test},
             {"n_train_shapes", rep.n_train_shapes},
             {"mode", a.mode},
             {"manifest", manifest_json(m)}};
    emit_line(out);
    return 0;
}

// ---------------------------------------------------------------- las

struct LasArgs {
    std::string gold_path, pred_path;
    bool exact_deprel = false;
    bool exclude_punct = false;
};

int run_las(const LasArgs& a) {
    Treebank gold = read_conllu_file(a.gold_path);
    Treebank pred = read_conllu_file(a.pred_path);
    if (a.exclude_punct) {
        gold = exclude_punct(gold);
        pred = exclude_punct(pred);
    }
    LasResult r = las(gold, pred, a.exact_deprel);

    RunManifest m = make_manifest("las",
                                  {{"gold", a.gold_path},
                                   {"pred", a.pred_path},
                                   {"exact_deprel", a.exact_deprel ? "true" : "false"},
                                   {"exclude_punct", a.exclude_punct ? "true" : "false"}},
                                  {a.gold_path, a.pred_path}, {});
    json out{{"correct", r.correct},
             {"total", r.total},
             {"score", round_sig6(r.score)},
             {"manifest", manifest_json(m)}};
    emit_line(out);
    return 0;
}

// -------------------------------------------------------------- canon

int run_canon(const std::string& path, const std::string& mode) {
    Treebank tb = read_conllu_file(path);
    IsoMode iso = parse_mode(mode);
    for (const DepTree& t : treebank_trees(tb))
        std::cout << canonical_code(t, iso).text << "\n";
    return 0;
}

// -------------------------------------------------------- count-trees

int run_count_trees(int n, const std::string& manifest_path) {
    std::cout << count_rooted_trees(n).str() << "\n";
    if (!manifest_path.empty()) {
        RunManifest m = make_manifest("count-trees", {{"n", std::to_string(n)}}, {}, {});
        write_file_atomic(manifest_path, m.to_json());
    }
    return 0;
}

// ------------------------------------------------------ sample-splits

struct SplitArgs {
    std::string pool_path;
    std::string out_dir;
    int length = 12;
    int train_n = 1000;
    int test_n = 200;
    int min_pool = -1; // default: train_n + test_n
    std::uint64_t seed = 0;
};

int run_sample_splits(const SplitArgs& a) {
    Treebank pool = read_conllu_file(a.pool_path);
    int min_pool = a.min_pool >= 0 ? a.min_pool : a.train_n + a.test_n;
    ControlledSplit split =
        sample_controlled_splits(pool, a.length, a.train_n, a.test_n, min_pool, a.seed);

    fs::create_directories(a.out_dir);
    write_file_atomic(fs::path(a.out_dir) / "train.conllu", write_conllu(split.train));
    for (std::size_t t = 0; t < split.tests.size(); ++t)
        write_file_atomic(fs::path(a.out_dir) / ("test_" + std::to_string(t) + ".conllu"),
                          write_conllu(split.tests[t]));

    RunManifest m = make_manifest("sample-splits",
                                  {{"pool", a.pool_path},
                                   {"out", a.out_dir},
                                   {"length", std::to_string(a.length)},
                                   {"train", std::to_string(a.train_n)},
                                   {"test", std::to_string(a.test_n)},
                                   {"min_pool", std::to_string(min_pool)}},
                                  {a.pool_path}, {a.seed});
    write_manifest(m, a.out_dir);

    long long pool_len = 0;
    for (const Sentence& s : pool.sentences)
        if (sentence_length(s) == a.length) ++pool_len;
    long long used = a.train_n + static_cast<long long>(split.tests.size()) * a.test_n;
    json out{{"train", a.train_n},
             {"tests", split.tests.size()},
             {"discarded", pool_len - used},
             {"out", a.out_dir}};
    emit_line(out);
    return 0;
}

// ------------------------------------------------------------ analyze

struct AnalyzeArgs {
    std::string records_csv;
    std::string treebank_dir;
    std::string out_dir;
    std::vector<int> tables = {1, 2, 3, 4, 5, 7, 8};
    std::vector<int> figures = {1, 2, 3};
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    bool exact_p = false;
    bool raw_size = false;
    bool exclude_punct = false;
};

struct TreebankTask {
    std::string name;
    fs::path train, gold, pred;
    bool ok = false;
    std::string error;
    TreebankRecord record;
    std::vector<BinRecord> bins;
    std::map<std::string, std::string> hashes;
};

void run_treebank_task(TreebankTask& task, bool exclude, bool exact_deprel) {
    auto load = [&](const fs::path& p) {
        std::string bytes = read_file(p);
        task.hashes[p.string()] = hash_hex(fnv1a64(bytes));
        Treebank tb = parse_conllu(bytes, task.name);
        return exclude ? exclude_punct(tb) : tb;
    };
    Treebank train = load(task.train);
    Treebank gold = load(task.gold);
    Treebank pred = load(task.pred);
    task.record = summarize_treebank(train, gold, pred);
    try {
        task.record.focused_dug = focused_dug(train, gold);
    } catch (const EmptySubsetError&) {
        // no sentences in the focused band; the record simply has no value
    }
    task.bins = length_binned_analysis(train, gold, pred);
    task.ok = true;
}

int run_analyze(const AnalyzeArgs& a) {
    for (int t : a.tables)
        if (t < 1 || t == 6 || t > 8)
            throw CLI::ValidationError("--tables", "unknown table " + std::to_string(t));
    for (int f : a.figures)
        if (f < 1 || f > 3)
            throw CLI::ValidationError("--figures", "unknown figure " + std::to_string(f));
    if (a.records_csv.empty() == a.treebank_dir.empty())
        throw CLI::ValidationError("analyze",
                                   "provide either a records CSV or --from-treebanks");

    std::vector<TreebankRecord> records;
    std::vector<BinRecord> all_bins;
    std::map<std::string, std::string> input_hashes;
    bool have_bins = false;

    if (!a.records_csv.empty()) {
        std::string bytes = read_file(a.records_csv);
        input_hashes[a.records_csv] = hash_hex(fnv1a64(bytes));
        records = parse_records_csv(bytes, fs::path(a.records_csv).filename().string());
        if (a.exclude_punct)
            std::cerr << "warning: --exclude-punct has no effect on records CSV input\n";
    } else {
        std::vector<TreebankTask> tasks;
        std::vector<fs::path> dirs;
        for (const auto& entry : fs::directory_iterator(a.treebank_dir))
            if (entry.is_directory()) dirs.push_back(entry.path());
        std::sort(dirs.begin(), dirs.end());
        for (const fs::path& dir : dirs) {
            TreebankTask task;
            task.name = dir.filename().string();
            task.train = dir / "train.conllu";
            task.gold = dir / "test-gold.conllu";
            task.pred = dir / "test-pred.conllu";
            bool complete = true;
            for (const fs::path* p : {&task.train, &task.gold, &task.pred}) {
                if (!fs::exists(*p)) {
                    std::cerr << "warning: skipping " << task.name << ": missing "
                              << p->filename().string() << "\n";
                    complete = false;
                }
            }
            if (complete) tasks.push_back(std::move(task));
        }
        if (tasks.empty()) throw Error("no usable treebank directories in " + a.treebank_dir);

        parallel_for(tasks.size(), [&](std::size_t i) {
            try {
                run_treebank_task(tasks[i], a.exclude_punct, false);
            } catch (const Error& e) {
                tasks[i].error = e.what();
            }
        });
        for (TreebankTask& task : tasks) {
            if (!task.ok) {
                std::cerr << "warning: skipping " << task.name << ": " << task.error << "\n";
                continue;
            }
            records.push_back(std::move(task.record));
            all_bins.insert(all_bins.end(), task.bins.begin(), task.bins.end());
            input_hashes.insert(task.hashes.begin(), task.hashes.end());
        }
        if (records.empty()) throw Error("all treebank directories failed");
        have_bins = true;
    }

    PValueMethod method = a.exact_p ? PValueMethod::ExactPermutation : PValueMethod::TApprox;
    std::vector<TreebankRecord> focused_records;
    for (const TreebankRecord& r : records)
        if (r.focused_dug) focused_records.push_back(r);

    fs::create_directories(a.out_dir);
    int produced = 0, failed = 0;
    auto emit_file = [&](const std::string& file, const std::function<std::string()>& make) {
        try {
            write_file_atomic(fs::path(a.out_dir) / file, make());
            ++produced;
        } catch (const Error& e) {
            std::cerr << "warning: skipping " << file << ": " << e.what() << "\n";
            ++failed;
        }
    };

    for (int t : a.tables) {
        switch (t) {
        case 1:
            emit_file("table1.csv", [&] {
                auto sets = standard_feature_sets("train_size", "dug");
                return cv_rows_csv(cv_table(records, sets, CvMode::Original, 3, a.seeds),
                                   cv_table(records, sets, CvMode::MultiSeed, 3, a.seeds));
            });
            break;
        case 2:
            emit_file("table2.csv",
                      [&] { return correlation_rows_csv(correlation_table(records, method)); });
            break;
        case 3:
            emit_file("table3.csv", [&] {
                auto sets = standard_feature_sets("log_size", "dug");
                return cv_rows_csv(cv_table(records, sets, CvMode::Original, 3, a.seeds),
                                   cv_table(records, sets, CvMode::MultiSeed, 3, a.seeds));
            });
            break;
        case 4:
            emit_file("table4.csv", [&] {
                if (focused_records.size() < 5)
                    throw StatsError("fewer than 5 records with focused_dug");
                return correlation_rows_csv(correlation_block(
                    focused_records, "focused_dug", {"las", "train_size", "mean_test_len"},
                    method));
            });
            emit_file("table4_cv.csv", [&] {
                auto sets = standard_feature_sets("log_size", "focused_dug");
                return cv_rows_csv(
                    cv_table(focused_records, sets, CvMode::Original, 3, a.seeds),
                    cv_table(focused_records, sets, CvMode::MultiSeed, 3, a.seeds));
            });
            break;
        case 5:
            emit_file("table5.csv", [&] {
                return correlation_rows_csv(partial_corr_table(records, "dug", "las", method));
            });
            break;
        case 7:
            emit_file("table7.csv", [&] {
                return correlation_rows_csv(
                    partial_corr_table(focused_records, "focused_dug", "las", method));
            });
            break;
        case 8:
            emit_file("table8.csv", [&] {
                return correlation_rows_csv(
                    background_subtract(records, !a.raw_size, method).report);
            });
            break;
        default:
            break;
        }
    }
    for (int f : a.figures) {
        switch (f) {
        case 1:
            emit_file("figure1.csv", [&] { return scatter_csv(records); });
            break;
        case 2:
            emit_file("figure2.csv", [&] {
                if (!have_bins)
                    throw StatsError("length bins need --from-treebanks input");
                return bins_csv(all_bins);
            });
            break;
        case 3:
            emit_file("figure3.csv", [&] {
                return background_csv(records, background_subtract(records, !a.raw_size, method));
            });
            break;
        default:
            break;
        }
    }
    if (!a.treebank_dir.empty())
        emit_file("records.csv", [&] { return write_records_csv(records); });

    RunManifest m;
    m.command = "analyze";
    m.version = kVersion;
    m.seed_list = a.seeds;
    m.input_hashes = std::move(input_hashes);
    auto join_ints = [](const auto& v) {
        std::string s;
        for (auto x : v) {
            if (!s.empty()) s += ',';
            s += std::to_string(x);
        }
        return s;
    };
    m.arguments = {{"records", a.records_csv},
                   {"from_treebanks", a.treebank_dir},
                   {"out", a.out_dir},
                   {"tables", join_ints(a.tables)},
                   {"figures", join_ints(a.figures)},
                   {"exact_p", a.exact_p ? "true" : "false"},
                   {"raw_size", a.raw_size ? "true" : "false"},
                   {"exclude_punct", a.exclude_punct ? "true" : "false"}};
    RunManifest stamped = make_manifest(m.command, m.arguments, {}, m.seed_list);
    m.timestamp = stamped.timestamp;
    write_manifest(m, a.out_dir);

    if (produced == 0 && failed > 0) throw Error("all requested outputs failed");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Treebank tree-isomorphism overlap and parser-performance analysis"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    DugArgs dug_args;
    auto* cmd_dug = app.add_subcommand("dug", "Isomorphism overlap between two treebanks");
    cmd_dug->add_option("train", dug_args.train_path, "training CoNLL-U file")->required();
    cmd_dug->add_option("test", dug_args.test_path, "test CoNLL-U file")->required();
    cmd_dug->add_option("--mode", dug_args.mode, "directed|undirected")
        ->check(CLI::IsMember({"directed", "undirected"}));
    cmd_dug->add_option("--lengths", dug_args.lengths,
                        "restrict both treebanks to sentence lengths LO:HI");
    cmd_dug->add_flag("--exclude-punct", dug_args.exclude_punct,
                      "drop UPOS=PUNCT words before the analysis");

    LasArgs las_args;
    auto* cmd_las = app.add_subcommand("las", "Labeled attachment score");
    cmd_las->add_option("gold", las_args.gold_path, "gold CoNLL-U file")->required();
    cmd_las->add_option("pred", las_args.pred_path, "predicted CoNLL-U file")->required();
    cmd_las->add_flag("--exact-deprel", las_args.exact_deprel,
                      "compare full labels without subtype stripping");
    cmd_las->add_flag("--exclude-punct", las_args.exclude_punct,
                      "drop UPOS=PUNCT words before scoring");

    std::string canon_path, canon_mode = "directed";
    auto* cmd_canon = app.add_subcommand("canon", "Canonical tree codes, one per line");
    cmd_canon->add_option("file", canon_path, "CoNLL-U file")->required();
    cmd_canon->add_option("--mode", canon_mode, "directed|undirected")
        ->check(CLI::IsMember({"directed", "undirected"}));

    int count_n = 0;
    std::string count_manifest;
    auto* cmd_count = app.add_subcommand("count-trees", "Number of rooted trees on n nodes");
    cmd_count->add_option("n", count_n, "node count")->required()->check(CLI::PositiveNumber);
    cmd_count->add_option("--manifest", count_manifest, "also write a run manifest here");

    SplitArgs split_args;
    auto* cmd_split = app.add_subcommand("sample-splits",
                                         "Fixed-length controlled train/test splits");
    cmd_split->add_option("pool", split_args.pool_path, "pool CoNLL-U file")->required();
    cmd_split->add_option("--out", split_args.out_dir, "output directory")->required();
    cmd_split->add_option("--length", split_args.length, "sentence length to keep")
        ->check(CLI::PositiveNumber);
    cmd_split->add_option("--train", split_args.train_n, "training set size")
        ->check(CLI::PositiveNumber);
    cmd_split->add_option("--test", split_args.test_n, "test set size")
        ->check(CLI::PositiveNumber);
    cmd_split->add_option("--min-pool", split_args.min_pool,
                          "minimum pool size (default: train+test)");
    cmd_split->add_option("--seed", split_args.seed, "shuffle seed");

    AnalyzeArgs an;
    auto* cmd_analyze = app.add_subcommand("analyze", "Tables and figure data");
    cmd_analyze->add_option("records", an.records_csv, "records CSV");
    cmd_analyze->add_option("--from-treebanks", an.treebank_dir,
                            "directory of per-treebank train/test-gold/test-pred triples");
    cmd_analyze->add_option("--out", an.out_dir, "output directory")->required();
    cmd_analyze->add_option("--tables", an.tables, "tables to emit (1,2,3,4,5,7,8)")
        ->delimiter(',');
    cmd_analyze->add_option("--figures", an.figures, "figure data to emit (1,2,3)")
        ->delimiter(',');
    cmd_analyze->add_option("--seeds", an.seeds, "seeds for multiseed CV")->delimiter(',');
    cmd_analyze->add_flag("--exact-p", an.exact_p,
                          "exact permutation p-values (n <= 10 records)");
    cmd_analyze->add_flag("--raw-size", an.raw_size,
                          "regress background on raw size instead of log size");
    cmd_analyze->add_flag("--exclude-punct", an.exclude_punct,
                          "drop UPOS=PUNCT words before the analysis");

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(cmd_dug)) return run_dug(dug_args);
        if (app.got_subcommand(cmd_las)) return run_las(las_args);
        if (app.got_subcommand(cmd_canon)) return run_canon(canon_path, canon_mode);
        if (app.got_subcommand(cmd_count)) return run_count_trees(count_n, count_manifest);
        if (app.got_subcommand(cmd_split)) return run_sample_splits(split_args);
        if (app.got_subcommand(cmd_analyze)) return run_analyze(an);
        return 1;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const EmptySubsetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const AlignmentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const InsufficientPoolError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
