// conet: build cosine-normalized concept co-occurrence networks from tiered
// document corpora and run the associated network analyses.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conet/community.hpp"
#include "conet/corpus.hpp"
#include "conet/decompose.hpp"
#include "conet/diff.hpp"
#include "conet/fetch.hpp"
#include "conet/io.hpp"
#include "conet/metrics.hpp"
#include "conet/network.hpp"
#include "conet/null_model.hpp"
#include "conet/pipeline.hpp"
#include "conet/statfit.hpp"

namespace {

using namespace conet;

TierLabel parse_tier(const std::string& s) {
    if (s == "I") return TierLabel::Impactful;
    if (s == "NI") return TierLabel::NonImpactful;
    throw ConfigError("tier must be I or NI, got: " + s);
}

CorpusStore load_corpus(const std::string& path, bool report = false) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus: " + path);
    CorpusStore store;
    const auto rep = store.ingest(in);
    if (report) {
        std::cout << "accepted\t" << rep.accepted << "\nduplicates\t" << rep.duplicates
                  << "\nrejected\t" << rep.rejections.size() << '\n';
        for (const auto& r : rep.rejections)
            std::cerr << "line " << r.line << ": " << r.reason << '\n';
    }
    return store;
}

JournalTierTable load_ranking(const std::string& path,
                              DuplicateRankPolicy policy = DuplicateRankPolicy::Best) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open ranking: " + path);
    return JournalTierTable::from_stream(in, policy);
}

Partition load_partition(const WeightedNetwork& net, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open partition: " + path);
    Partition p;
    p.community.assign(net.size(), -1);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        const auto sv = trim(std::string_view(line));
        if (sv.empty()) continue;
        const auto fields = split(sv, '\t');
        if (fields.size() != 2) throw DataError("bad partition line: " + std::string(sv));
        p.community[net.index_of(std::string(fields[0]))] = std::stoi(std::string(fields[1]));
    }
    for (int c : p.community)
        if (c < 0) throw DataError("partition does not cover all nodes");
    p.community_count = *std::max_element(p.community.begin(), p.community.end()) + 1;
    return p;
}

int run_app(int argc, char** argv) {
    CLI::App app{"concept co-occurrence network analysis"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "ingest a corpus file and report counts");
    std::string corpus_path, ranking_path, labels_path;
    ingest->add_option("--corpus", corpus_path)->required();
    ingest->callback([&] {
        const auto store = load_corpus(corpus_path, true);
        for (const auto& [year, n] : store.counts_by_year())
            std::cout << "year\t" << year << '\t' << n << '\n';
    });

    // tiers
    auto* tiers = app.add_subcommand("tiers", "classify journals into impact tiers");
    double cutoff = 0.10;
    int year = 0;
    std::string journal;
    tiers->add_option("--ranking", ranking_path)->required();
    tiers->add_option("--cutoff", cutoff);
    tiers->add_option("--year", year)->required();
    tiers->add_option("--journal", journal)->required();
    tiers->callback([&] {
        const auto table = load_ranking(ranking_path);
        std::cout << to_string(table.classify(year, journal, cutoff)) << '\n';
    });

    // view
    auto* view_cmd = app.add_subcommand("view", "filtered corpus view");
    std::string tier_str = "NI";
    std::optional<int> month;
    bool count_only = false;
    view_cmd->add_option("--corpus", corpus_path)->required();
    view_cmd->add_option("--ranking", ranking_path)->required();
    view_cmd->add_option("--tier", tier_str);
    view_cmd->add_option("--year", year)->required();
    view_cmd->add_option("--month", month);
    view_cmd->add_option("--cutoff", cutoff);
    view_cmd->add_flag("--count", count_only);
    view_cmd->callback([&] {
        const auto store = load_corpus(corpus_path);
        const auto table = load_ranking(ranking_path);
        const auto view = make_view(store, table, parse_tier(tier_str), year, month, cutoff);
        if (count_only) {
            std::cout << view.count() << '\n';
        } else {
            for (const auto* r : view.records) std::cout << r->doc_id << '\n';
        }
    });

    // build-net
    auto* build = app.add_subcommand("build-net", "build a cosine-normalized network");
    std::string out_path;
    build->add_option("--corpus", corpus_path)->required();
    build->add_option("--ranking", ranking_path)->required();
    build->add_option("--labels", labels_path);
    build->add_option("--tier", tier_str)->required();
    build->add_option("--year", year)->required();
    build->add_option("--month", month);
    build->add_option("--cutoff", cutoff);
    build->add_option("--out", out_path)->required();
    bool rollup = false;
    build->add_flag("--rollup", rollup, "collapse concepts to second-level ancestors");
    build->callback([&] {
        auto store = load_corpus(corpus_path);
        if (rollup) store.rollup_concepts();
        const auto table = load_ranking(ranking_path);
        const auto view = make_view(store, table, parse_tier(tier_str), year, month, cutoff);
        NetworkMeta meta;
        meta.tier = view.tier_name;
        meta.year = year;
        meta.doc_count = view.count();
        const auto net =
            cosine_normalize(count_cooccurrences(view, store.concept_universe()), meta);
        write_network_dir(net, out_path,
                          labels_path.empty() ? LabelMap{} : read_labels(labels_path));
    });

    // metrics
    auto* metrics_cmd = app.add_subcommand("metrics", "global metrics report");
    std::string net_path, component = "all";
    std::uint64_t seed = 42;
    std::size_t seeds = 20;
    metrics_cmd->add_option("--net", net_path)->required();
    metrics_cmd->add_option("--out", out_path)->required();
    metrics_cmd->add_option("--component", component)->check(CLI::IsMember({"all", "largest"}));
    metrics_cmd->add_option("--seed", seed);
    metrics_cmd->add_option("--seeds", seeds);
    metrics_cmd->callback([&] {
        const auto net = read_network_dir(net_path);
        const auto partition = louvain_multi(net, seed, seeds);
        const auto report = global_metrics(net, component == "largest");
        nlohmann::ordered_json j;
        j["mean_strength"] = report.mean_strength;
        j["edge_density"] = report.edge_density;
        j["aspl"] = report.aspl;
        j["gcc"] = report.gcc;
        if (report.assortativity)
            j["assortativity"] = *report.assortativity;
        else
            j["assortativity"] = nullptr;
        j["modularity"] = partition.modularity;
        j["modularity_seed"] = partition.seed;
        j["node_count"] = report.node_count;
        j["edge_count"] = report.edge_count;
        j["aspl_largest_component_only"] = report.aspl_largest_component_only;
        j["distance_convention"] = GlobalMetricsReport::distance_convention;
        std::ofstream out(out_path);
        if (!out) throw DataError("cannot write " + out_path);
        out << j.dump(2) << '\n';
    });

    // rank
    auto* rank = app.add_subcommand("rank", "top nodes by strength or betweenness");
    std::string key = "strength";
    std::size_t top = 3;
    rank->add_option("--net", net_path)->required();
    rank->add_option("--key", key)->check(CLI::IsMember({"strength", "betweenness"}));
    rank->add_option("--top", top);
    rank->callback([&] {
        const auto net = read_network_dir(net_path);
        for (const auto& r :
             top_nodes(net, key == "strength" ? RankKey::Strength : RankKey::Betweenness, top))
            std::cout << r.code << '\t' << fmt_weight(r.value) << '\n';
    });

    // communities
    auto* comm = app.add_subcommand("communities", "Louvain community detection");
    double resolution = 1.0;
    comm->add_option("--net", net_path)->required();
    comm->add_option("--seeds", seeds);
    comm->add_option("--seed", seed);
    comm->add_option("--resolution", resolution);
    comm->add_option("--out", out_path)->required();
    comm->callback([&] {
        const auto net = read_network_dir(net_path);
        const auto partition = louvain_multi(net, seed, seeds, resolution);
        write_partition(net, partition, out_path);
        std::cout << "modularity\t" << fmt_weight(partition.modularity) << "\ncommunities\t"
                  << partition.community_count << "\nseed\t" << partition.seed << '\n';
    });

    // categories
    auto* cats = app.add_subcommand("categories", "first-level category strengths");
    cats->add_option("--net", net_path)->required();
    cats->add_option("--out", out_path)->required();
    cats->callback([&] {
        const auto net = read_network_dir(net_path);
        std::ofstream out(out_path);
        if (!out) throw DataError("cannot write " + out_path);
        out << "category\ts_total\ts_intra\ts_inter\n";
        for (const auto& [name, s] : category_strengths(net))
            out << name << '\t' << fmt_weight(s.total) << '\t' << fmt_weight(s.intra) << '\t'
                << fmt_weight(s.inter) << '\n';
    });

    // nullband
    auto* nullband = app.add_subcommand("nullband", "null-ensemble band for an observable");
    std::string observable = "lcc-curve", swaps_str = "auto", mode_str = "all-pairs";
    std::size_t replicates = 100, grid_points = 400;
    nullband->add_option("--net", net_path)->required();
    nullband->add_option("--observable", observable)
        ->check(CLI::IsMember({"lcc-curve", "mean-strength"}));
    nullband->add_option("--replicates", replicates);
    nullband->add_option("--swaps", swaps_str);
    nullband->add_option("--seed", seed);
    nullband->add_option("--mode", mode_str)->check(CLI::IsMember({"all-pairs", "existing-links"}));
    nullband->add_option("--grid", grid_points);
    nullband->add_option("--out", out_path)->required();
    nullband->callback([&] {
        const auto net = read_network_dir(net_path);
        EnsembleSpec spec;
        spec.replicates = replicates;
        spec.swaps = swaps_str == "auto" ? 0 : std::stoul(swaps_str);
        spec.seed = seed;
        spec.mode = mode_str == "all-pairs" ? RewireMode::AllPairs : RewireMode::ExistingLinks;
        std::ofstream out(out_path);
        if (!out) throw DataError("cannot write " + out_path);
        out << "# mode " << mode_str << '\n';
        if (observable == "mean-strength") {
            const auto band = ensemble_band(net, spec, [](const WeightedNetwork& g) {
                return std::vector<double>{mean_strength(g)};
            });
            out << "point,mean,lo,hi\n0," << fmt_weight(band.mean[0]) << ','
                << fmt_weight(band.lower[0]) << ',' << fmt_weight(band.upper[0]) << '\n';
        } else {
            const auto grid = make_threshold_grid(net, grid_points);
            const auto band = ensemble_band(net, spec, [&grid](const WeightedNetwork& g) {
                const auto sizes = lcc_curve(g, grid);
                return std::vector<double>(sizes.begin(), sizes.end());
            });
            out << "threshold,mean,lo,hi\n";
            for (std::size_t k = 0; k < grid.size(); ++k)
                out << fmt_weight(grid[k]) << ',' << fmt_weight(band.mean[k]) << ','
                    << fmt_weight(band.lower[k]) << ',' << fmt_weight(band.upper[k]) << '\n';
        }
    });

    // decompose
    auto* decomp = app.add_subcommand("decompose", "threshold decomposition profile and core");
    std::size_t target = 10;
    std::vector<std::string> decomp_out;
    decomp->add_option("--net", net_path)->required();
    decomp->add_option("--target", target);
    decomp->add_option("--grid", grid_points);
    decomp->add_option("--replicates", replicates);
    decomp->add_option("--seed", seed);
    decomp->add_option("--out", decomp_out)->expected(2)->required();
    decomp->callback([&] {
        const auto net = read_network_dir(net_path);
        const auto grid = make_threshold_grid(net, grid_points);
        EnsembleSpec spec;
        spec.replicates = replicates;
        spec.seed = seed;
        const auto profile = compare_to_null(net, spec, grid);
        std::ofstream out(decomp_out[0]);
        if (!out) throw DataError("cannot write " + decomp_out[0]);
        out << "threshold,lcc_size,null_mean,null_lo,null_hi\n";
        for (std::size_t k = 0; k < grid.size(); ++k)
            out << fmt_weight(grid[k]) << ',' << profile.lcc_sizes[k] << ','
                << fmt_weight(profile.null_band.mean[k]) << ','
                << fmt_weight(profile.null_band.lower[k]) << ','
                << fmt_weight(profile.null_band.upper[k]) << '\n';
        const auto core = inner_core(net, target, grid);
        std::ofstream cout_(decomp_out[1]);
        if (!cout_) throw DataError("cannot write " + decomp_out[1]);
        cout_ << "# core_size " << core.core_size << "\n# interval " << fmt_weight(core.interval_lo)
              << ' ' << fmt_weight(core.interval_hi) << '\n';
        for (const auto& c : core.members) cout_ << c << '\n';
    });

    // diff
    auto* diff_cmd = app.add_subcommand("diff", "signed difference networks");
    std::string a_path, b_path;
    bool normalize = false;
    diff_cmd->add_option("--a", a_path)->required();
    diff_cmd->add_option("--b", b_path)->required();
    diff_cmd->add_flag("--normalize", normalize);
    diff_cmd->add_option("--out", out_path)->required();
    diff_cmd->callback([&] {
        const auto a = read_network_dir(a_path);
        const auto b = read_network_dir(b_path);
        const auto diff = signed_difference(a, b, normalize);
        write_network_dir(diff.positive, fs::path(out_path) / "pos");
        write_network_dir(diff.negative, fs::path(out_path) / "neg");
        std::cout << "normalization\t" << fmt_weight(diff.normalization) << '\n';
    });

    // colocate
    auto* coloc = app.add_subcommand("colocate", "link co-location regression");
    std::string diff_dir, coloc_mode = "pos-pos";
    coloc->add_option("--diff", diff_dir, "directory produced by `diff` (pos/ and neg/)")->required();
    coloc->add_option("--mode", coloc_mode)
        ->check(CLI::IsMember({"pos-pos", "neg-neg", "pos-neg", "neg-pos"}));
    coloc->add_option("--out", out_path)->required();
    coloc->callback([&] {
        SignedDifferenceNetworks diff;
        diff.positive = read_network_dir(fs::path(diff_dir) / "pos");
        diff.negative = read_network_dir(fs::path(diff_dir) / "neg");
        ColocationMode mode = ColocationMode::PosPos;
        if (coloc_mode == "neg-neg") mode = ColocationMode::NegNeg;
        if (coloc_mode == "pos-neg") mode = ColocationMode::PosNeg;
        if (coloc_mode == "neg-pos") mode = ColocationMode::NegPos;
        const auto reg = colocation_regression(diff, mode);
        std::ofstream out(out_path);
        if (!out) throw DataError("cannot write " + out_path);
        out << "mode,slope,intercept,r_squared,samples\n"
            << coloc_mode << ',' << fmt_weight(reg.slope) << ',' << fmt_weight(reg.intercept) << ','
            << fmt_weight(reg.r_squared) << ',' << reg.sample_count << '\n';
        out << "bin_x,bin_y_mean,bin_y_stderr,bin_count\n";
        for (const auto& b : reg.bins)
            out << fmt_weight(b.x_center) << ',' << fmt_weight(b.y_mean) << ','
                << fmt_weight(b.y_stderr) << ',' << b.count << '\n';
    });

    // scaling
    auto* scal = app.add_subcommand("scaling", "dual power-law fits against reference networks");
    std::string artifacts_dir, years_str;
    scal->add_option("--dir", artifacts_dir, "pipeline output directory")->required();
    scal->add_option("--years", years_str)->required();
    scal->add_option("--out", out_path)->required();
    scal->callback([&] {
        std::vector<std::pair<double, double>> pooled_pos, pooled_neg;
        nlohmann::ordered_json j;
        for (const auto y : split(years_str, ',')) {
            const std::string ys{trim(y)};
            const auto ref = read_network_dir(fs::path(artifacts_dir) / ("net_I_" + ys));
            SignedDifferenceNetworks diff;
            diff.positive = read_network_dir(fs::path(artifacts_dir) / ("net_diffpos_" + ys));
            diff.negative = read_network_dir(fs::path(artifacts_dir) / ("net_diffneg_" + ys));
            std::vector<std::pair<double, double>> pos, neg;
            scaling_samples(diff, ref, pos, neg);
            try {
                const auto fits = diff_vs_reference_scaling(diff, ref);
                j["per_year"][ys] = {{"positive_alpha", fits.positive.exponent},
                                     {"positive_r_squared", fits.positive.r_squared},
                                     {"negative_alpha", fits.negative.exponent},
                                     {"negative_r_squared", fits.negative.r_squared}};
            } catch (const std::exception& e) {
                j["per_year"][ys]["error"] = e.what();
            }
            pooled_pos.insert(pooled_pos.end(), pos.begin(), pos.end());
            pooled_neg.insert(pooled_neg.end(), neg.begin(), neg.end());
        }
        try {
            const auto p = fit_scaling(pooled_pos);
            j["pooled"]["positive_alpha"] = p.exponent;
            j["pooled"]["positive_r_squared"] = p.r_squared;
        } catch (const std::exception& e) {
            j["pooled"]["positive_error"] = e.what();
        }
        try {
            const auto p = fit_scaling(pooled_neg);
            j["pooled"]["negative_alpha"] = p.exponent;
            j["pooled"]["negative_r_squared"] = p.r_squared;
        } catch (const std::exception& e) {
            j["pooled"]["negative_error"] = e.what();
        }
        std::ofstream out(out_path);
        if (!out) throw DataError("cannot write " + out_path);
        out << j.dump(2) << '\n';
    });

    // dist
    auto* dist = app.add_subcommand("dist", "binned distributions with reference fits");
    std::string what = "links", fit_kind;
    std::size_t bins = 30;
    double xmin = 0.0316227766017;
    std::string range_str = "1,6";
    dist->add_option("--net", net_path)->required();
    dist->add_option("--what", what)->check(CLI::IsMember({"links", "nodes"}));
    dist->add_option("--bins", bins);
    dist->add_option("--fit", fit_kind)->check(CLI::IsMember({"powerlaw", "exponential"}));
    dist->add_option("--xmin", xmin);
    dist->add_option("--range", range_str);
    dist->add_option("--out", out_path)->required();
    dist->callback([&] {
        const auto net = read_network_dir(net_path);
        std::vector<double> samples;
        if (what == "links") {
            for (const auto& e : net.edges()) samples.push_back(e.weight);
        } else {
            samples = net.strengths();
        }
        const auto hist = log_binned_histogram(samples, bins);
        std::ofstream out(out_path);
        if (!out) throw DataError("cannot write " + out_path);
        out << "bin_lo,bin_hi,count,density\n";
        for (std::size_t b = 0; b < hist.counts.size(); ++b)
            out << fmt_weight(hist.edges[b]) << ',' << fmt_weight(hist.edges[b + 1]) << ','
                << hist.counts[b] << ',' << fmt_weight(hist.density[b]) << '\n';
        if (fit_kind == "powerlaw") {
            const auto fit = fit_power_law_tail(samples, xmin);
            out << "# powerlaw alpha " << fmt_weight(fit.parameter) << " ks "
                << fmt_weight(fit.ks_statistic) << " n " << fit.sample_count << '\n';
        } else if (fit_kind == "exponential") {
            const auto parts = split(range_str, ',');
            if (parts.size() != 2) throw ConfigError("--range expects a,b");
            const auto fit = fit_truncated_exponential(samples, std::stod(std::string(parts[0])),
                                                       std::stod(std::string(parts[1])));
            out << "# exponential lambda " << fmt_weight(fit.parameter) << " ks "
                << fmt_weight(fit.ks_statistic) << " n " << fit.sample_count << '\n';
        }
    });

    // run
    auto* run_cmd = app.add_subcommand("run", "full pipeline from a config file");
    std::string config_path;
    run_cmd->add_option("--config", config_path)->required();
    run_cmd->add_option("--out", out_path)->required();
    run_cmd->callback([&] {
        const auto manifest = run_pipeline(Config::from_file(config_path), out_path);
        std::cout << "artifacts\t" << manifest.artifacts.size() << "\ncomplete\t"
                  << (manifest.complete ? "yes" : "no") << '\n';
    });

    // export
    auto* exp = app.add_subcommand("export", "export a network to edge-tsv or graph-xml");
    std::string format = "edge-tsv", partition_path;
    exp->add_option("--net", net_path)->required();
    exp->add_option("--format", format)->check(CLI::IsMember({"edge-tsv", "graph-xml"}));
    exp->add_option("--partition", partition_path);
    exp->add_option("--labels", labels_path);
    exp->add_option("--out", out_path)->required();
    exp->callback([&] {
        const auto net = read_network_dir(net_path);
        const LabelMap labels = labels_path.empty() ? LabelMap{} : read_labels(labels_path);
        if (format == "edge-tsv") {
            std::ofstream out(out_path);
            if (!out) throw DataError("cannot write " + out_path);
            out << "code_i\tcode_j\tweight\n";
            std::vector<std::pair<std::pair<std::string, std::string>, double>> rows;
            for (const auto& e : net.edges()) {
                std::string a = net.nodes()[e.i], b = net.nodes()[e.j];
                if (b < a) std::swap(a, b);
                rows.push_back({{a, b}, e.weight});
            }
            std::sort(rows.begin(), rows.end());
            for (const auto& [k, w] : rows)
                out << k.first << '\t' << k.second << '\t' << fmt_weight(w) << '\n';
        } else {
            if (partition_path.empty()) {
                write_graphml(net, out_path, nullptr, labels);
            } else {
                const auto partition = load_partition(net, partition_path);
                write_graphml(net, out_path, &partition, labels);
            }
        }
    });

    // fetch
    auto* fetch_cmd = app.add_subcommand("fetch", "fetch records from a remote endpoint");
    FetchConfig fc;
    FetchWindow fw;
    fetch_cmd->add_option("--base-url", fc.base_url);
    fetch_cmd->add_option("--path", fc.path);
    fetch_cmd->add_option("--api-key-env", fc.api_key_env);
    fetch_cmd->add_option("--rps", fc.requests_per_second);
    fetch_cmd->add_option("--retries", fc.max_retries);
    fetch_cmd->add_option("--year", fw.year)->required();
    fetch_cmd->add_option("--month-lo", fw.month_lo);
    fetch_cmd->add_option("--month-hi", fw.month_hi);
    fetch_cmd->add_option("--out", out_path)->required();
    fetch_cmd->callback([&] {
        const auto result = fetch_remote(fc, fw);
        std::ofstream out(out_path);
        if (!out) throw DataError("cannot write " + out_path);
        for (const auto& r : result.records) {
            out << r.doc_id << '\t' << r.year << '\t' << r.month << '\t' << r.journal_id << '\t';
            bool first = true;
            for (const auto& c : r.concepts) {
                if (!first) out << ',';
                out << c;
                first = false;
            }
            out << '\n';
        }
        std::cerr << "fetched " << result.records.size() << " records, "
                  << result.rejections.size() << " rejected\n";
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_app(argc, argv);
    } catch (const conet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const conet::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const conet::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
