#pragma once
// Full-pipeline orchestration: corpus -> tier networks -> metrics,
// communities, null bands, decomposition, difference analyses and
// distribution fits, all emitted as deterministic flat-file artifacts.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "conet/community.hpp"
#include "conet/corpus.hpp"
#include "conet/decompose.hpp"
#include "conet/diff.hpp"
#include "conet/io.hpp"
#include "conet/metrics.hpp"
#include "conet/network.hpp"
#include "conet/null_model.hpp"
#include "conet/statfit.hpp"

namespace conet {

struct PipelineSettings {
    fs::path corpus_path;
    fs::path ranking_path;
    std::optional<fs::path> labels_path;
    std::vector<int> years;
    int month = 6;
    double cutoff = 0.10;
    bool rollup = false;  // collapse concepts to second-level ancestors
    DuplicateRankPolicy rank_policy = DuplicateRankPolicy::Best;
    std::size_t replicates = 100;
    std::size_t swaps = 0;  // 0 = auto
    RewireMode rewire_mode = RewireMode::AllPairs;
    std::uint64_t seed = 42;
    std::size_t community_seeds = 20;
    double resolution = 1.0;
    std::size_t core_target = 10;
    std::size_t grid_points = 400;
    std::size_t hist_bins = 30;
    double powerlaw_xmin = 0.0316227766017;  // 10^-1.5
    bool normalize_diff = true;
    bool aspl_lcc_only = false;

    static PipelineSettings from_config(const Config& cfg) {
        PipelineSettings s;
        s.corpus_path = cfg.require("corpus.corpus");
        s.ranking_path = cfg.require("corpus.ranking");
        if (auto l = cfg.get("corpus.labels")) s.labels_path = *l;
        for (const auto y : split(cfg.require("corpus.years"), ','))
            s.years.push_back(std::stoi(std::string(trim(y))));
        if (s.years.empty()) throw ConfigError("no years configured");
        s.month = static_cast<int>(cfg.get_int("corpus.month", 6));
        s.cutoff = cfg.get_double("corpus.cutoff", 0.10);
        s.rollup = cfg.get_or("corpus.rollup", "false") == "true";
        const auto policy = cfg.get_or("corpus.duplicate_rank_policy", "best");
        if (policy == "best")
            s.rank_policy = DuplicateRankPolicy::Best;
        else if (policy == "worst")
            s.rank_policy = DuplicateRankPolicy::Worst;
        else if (policy == "error")
            s.rank_policy = DuplicateRankPolicy::Error;
        else
            throw ConfigError("bad duplicate_rank_policy: " + policy);
        s.replicates = static_cast<std::size_t>(cfg.get_int("null.replicates", 100));
        s.swaps = static_cast<std::size_t>(cfg.get_int("null.swaps", 0));
        const auto mode = cfg.get_or("null.mode", "all-pairs");
        if (mode == "all-pairs")
            s.rewire_mode = RewireMode::AllPairs;
        else if (mode == "existing-links")
            s.rewire_mode = RewireMode::ExistingLinks;
        else
            throw ConfigError("bad null.mode: " + mode);
        s.seed = static_cast<std::uint64_t>(cfg.get_int("null.seed", 42));
        s.community_seeds = static_cast<std::size_t>(cfg.get_int("community.seeds", 20));
        s.resolution = cfg.get_double("community.resolution", 1.0);
        s.core_target = static_cast<std::size_t>(cfg.get_int("decompose.target", 10));
        s.grid_points = static_cast<std::size_t>(cfg.get_int("decompose.grid_points", 400));
        s.hist_bins = static_cast<std::size_t>(cfg.get_int("dist.bins", 30));
        s.powerlaw_xmin = cfg.get_double("dist.xmin", s.powerlaw_xmin);
        s.normalize_diff = cfg.get_or("diff.normalize", "true") == "true";
        s.aspl_lcc_only = cfg.get_or("metrics.aspl_component", "all") == "largest";
        return s;
    }
};

namespace detail {

inline nlohmann::ordered_json metrics_json(const GlobalMetricsReport& r, const Partition& p) {
    nlohmann::ordered_json j;
    j["mean_strength"] = r.mean_strength;
    j["edge_density"] = r.edge_density;
    j["aspl"] = r.aspl;
    j["gcc"] = r.gcc;
    if (r.assortativity)
        j["assortativity"] = *r.assortativity;
    else
        j["assortativity"] = nullptr;
    j["modularity"] = p.modularity;
    j["modularity_seed"] = p.seed;
    j["community_count"] = p.community_count;
    j["node_count"] = r.node_count;
    j["edge_count"] = r.edge_count;
    j["aspl_largest_component_only"] = r.aspl_largest_component_only;
    j["distance_convention"] = GlobalMetricsReport::distance_convention;
    return j;
}

inline void write_profile_csv(const DecompositionProfile& profile, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "threshold,lcc_size,null_mean,null_lo,null_hi\n";
    for (std::size_t k = 0; k < profile.thresholds.size(); ++k)
        out << fmt_weight(profile.thresholds[k]) << ',' << profile.lcc_sizes[k] << ','
            << fmt_weight(profile.null_band.mean[k]) << ',' << fmt_weight(profile.null_band.lower[k])
            << ',' << fmt_weight(profile.null_band.upper[k]) << '\n';
}

inline void write_core_txt(const InnerCore& core, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "# core_size " << core.core_size << "\n# interval " << fmt_weight(core.interval_lo)
        << ' ' << fmt_weight(core.interval_hi) << '\n';
    if (core.size_jumped_past_target) out << "# note: LCC sizes jumped past the target\n";
    for (const auto& code : core.members) out << code << '\n';
}

inline void write_hist_csv(const BinnedHistogram& h, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "bin_lo,bin_hi,count,density\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        out << fmt_weight(h.edges[b]) << ',' << fmt_weight(h.edges[b + 1]) << ',' << h.counts[b]
            << ',' << fmt_weight(h.density[b]) << '\n';
    out << "# excluded_nonpositive " << h.excluded_nonpositive << '\n';
}

inline void write_rankings(std::ofstream& out, const std::string& net_name,
                           const WeightedNetwork& net) {
    for (const auto& r : top_nodes(net, RankKey::Strength, 3))
        out << net_name << "\tstrength\t" << r.code << '\t' << fmt_weight(r.value) << '\n';
    for (const auto& r : top_nodes(net, RankKey::Betweenness, 3))
        out << net_name << "\tbetweenness\t" << r.code << '\t' << fmt_weight(r.value) << '\n';
}

inline void write_categories(const WeightedNetwork& net, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "category\ts_total\ts_intra\ts_inter\n";
    for (const auto& [name, s] : category_strengths(net))
        out << name << '\t' << fmt_weight(s.total) << '\t' << fmt_weight(s.intra) << '\t'
            << fmt_weight(s.inter) << '\n';
}

inline nlohmann::ordered_json fit_json(const std::vector<double>& samples,
                                       const PipelineSettings& s) {
    nlohmann::ordered_json j;
    try {
        const auto pl = fit_power_law_tail(samples, s.powerlaw_xmin);
        j["powerlaw_alpha"] = pl.parameter;
        j["powerlaw_ks"] = pl.ks_statistic;
        j["powerlaw_tail_n"] = pl.sample_count;
    } catch (const std::exception& e) {
        j["powerlaw_error"] = e.what();
    }
    return j;
}

}  // namespace detail

// Orchestrates the whole run. On stage failure the manifest records partial
// completion and the error is rethrown for a nonzero exit.
inline RunManifest run_pipeline(const Config& cfg, const fs::path& out_dir) {
    const auto settings = PipelineSettings::from_config(cfg);
    RunManifest manifest;
    manifest.config_hash = hex64(cfg.hash());
    manifest.seed = settings.seed;
    fs::create_directories(out_dir);

    try {
        if (!fs::exists(settings.corpus_path))
            throw ConfigError("corpus file not found: " + settings.corpus_path.string());
        if (!fs::exists(settings.ranking_path))
            throw ConfigError("ranking file not found: " + settings.ranking_path.string());
        manifest.input_digests["corpus"] = hex64(file_digest(settings.corpus_path));
        manifest.input_digests["ranking"] = hex64(file_digest(settings.ranking_path));

        CorpusStore store;
        {
            std::ifstream in(settings.corpus_path);
            if (!in) throw DataError("cannot open corpus: " + settings.corpus_path.string());
            store.ingest(in);
        }
        JournalTierTable table;
        {
            std::ifstream in(settings.ranking_path);
            if (!in) throw DataError("cannot open ranking: " + settings.ranking_path.string());
            table = JournalTierTable::from_stream(in, settings.rank_policy);
        }
        LabelMap labels;
        if (settings.labels_path) {
            labels = read_labels(*settings.labels_path);
            manifest.input_digests["labels"] = hex64(file_digest(*settings.labels_path));
        }

        if (settings.rollup) store.rollup_concepts();
        const auto universe = store.concept_universe();

        // raw networks over the shared universe, then the cross-snapshot prune
        std::vector<WeightedNetwork> raw;
        std::vector<std::string> names;  // e.g. I_1999, NI-6_1999
        for (int year : settings.years) {
            for (int variant = 0; variant < 2; ++variant) {
                const bool impactful = variant == 0;
                auto view = make_view(store, table,
                                      impactful ? TierLabel::Impactful : TierLabel::NonImpactful,
                                      year, impactful ? std::nullopt : std::optional<int>(settings.month),
                                      settings.cutoff);
                NetworkMeta meta;
                meta.tier = view.tier_name;
                meta.year = year;
                meta.doc_count = view.count();
                raw.push_back(cosine_normalize(count_cooccurrences(view, universe), meta));
                names.push_back(view.tier_name + "_" + std::to_string(year));
            }
        }
        auto pruned = prune_shared_isolates(raw);
        {
            std::ofstream out(out_dir / "removed_nodes.txt");
            for (const auto& code : pruned.removed) out << code << '\n';
        }
        manifest.record(out_dir, out_dir / "removed_nodes.txt");

        const EnsembleSpec ens{settings.replicates, settings.swaps, settings.seed,
                               settings.rewire_mode};

        nlohmann::ordered_json all_metrics;
        std::ofstream rankings(out_dir / "rankings.tsv");
        rankings << "network\tkey\tcode\tvalue\n";
        std::map<int, std::pair<const WeightedNetwork*, const WeightedNetwork*>> by_year;

        for (std::size_t k = 0; k < pruned.networks.size(); ++k) {
            const auto& net = pruned.networks[k];
            const auto& name = names[k];
            const fs::path net_dir = out_dir / ("net_" + name);
            write_network_dir(net, net_dir, labels);
            manifest.record(out_dir, net_dir / "edges.tsv");
            manifest.record(out_dir, net_dir / "nodes.tsv");
            manifest.record(out_dir, net_dir / "meta.json");

            const auto partition =
                louvain_multi(net, settings.seed, settings.community_seeds, settings.resolution);
            write_partition(net, partition, net_dir / "partition.tsv");
            manifest.record(out_dir, net_dir / "partition.tsv");
            detail::write_categories(net, net_dir / "cat_strengths.tsv");
            manifest.record(out_dir, net_dir / "cat_strengths.tsv");

            all_metrics[name] = detail::metrics_json(
                global_metrics(net, settings.aspl_lcc_only), partition);

            const auto grid = make_threshold_grid(net, settings.grid_points);
            const auto profile = compare_to_null(net, ens, grid);
            detail::write_profile_csv(profile, net_dir / "profile.csv");
            manifest.record(out_dir, net_dir / "profile.csv");
            detail::write_core_txt(inner_core(net, settings.core_target, grid),
                                   net_dir / "core.txt");
            manifest.record(out_dir, net_dir / "core.txt");

            std::vector<double> link_weights;
            for (const auto& e : net.edges()) link_weights.push_back(e.weight);
            detail::write_hist_csv(log_binned_histogram(link_weights, settings.hist_bins),
                                   net_dir / "dist_links.csv");
            manifest.record(out_dir, net_dir / "dist_links.csv");
            detail::write_hist_csv(log_binned_histogram(net.strengths(), settings.hist_bins),
                                   net_dir / "dist_nodes.csv");
            manifest.record(out_dir, net_dir / "dist_nodes.csv");
            all_metrics[name]["link_strength_fit"] = detail::fit_json(link_weights, settings);
            try {
                const auto ef = fit_truncated_exponential(net.strengths(), 1.0, 6.0);
                all_metrics[name]["node_strength_fit"] = {{"exponential_lambda", ef.parameter},
                                                          {"ks", ef.ks_statistic},
                                                          {"n", ef.sample_count}};
            } catch (const std::exception& e) {
                all_metrics[name]["node_strength_fit"] = {{"error", e.what()}};
            }

            write_graphml(net, net_dir / "network.graphml", &partition, labels);
            manifest.record(out_dir, net_dir / "network.graphml");

            detail::write_rankings(rankings, name, net);
            auto& slot = by_year[net.meta().year];
            (k % 2 == 0 ? slot.first : slot.second) = &net;
        }
        rankings.close();
        manifest.record(out_dir, out_dir / "rankings.tsv");

        // signed difference analyses per year + pooled dual power-law fits
        nlohmann::ordered_json scaling_json;
        std::vector<std::pair<double, double>> pooled_pos, pooled_neg;
        std::ofstream colocation(out_dir / "colocation.csv");
        colocation << "year,mode,slope,intercept,r_squared,samples\n";
        for (const auto& [year, nets] : by_year) {
            const auto diff = signed_difference(*nets.first, *nets.second, settings.normalize_diff);
            const std::string ys = std::to_string(year);
            write_network_dir(diff.positive, out_dir / ("net_diffpos_" + ys), labels);
            write_network_dir(diff.negative, out_dir / ("net_diffneg_" + ys), labels);
            for (const auto leaf : {"edges.tsv", "nodes.tsv", "meta.json"}) {
                manifest.record(out_dir, out_dir / ("net_diffpos_" + ys) / leaf);
                manifest.record(out_dir, out_dir / ("net_diffneg_" + ys) / leaf);
            }

            const std::pair<std::string, ColocationMode> modes[] = {
                {"pos-pos", ColocationMode::PosPos},
                {"neg-neg", ColocationMode::NegNeg},
                {"pos-neg", ColocationMode::PosNeg},
                {"neg-pos", ColocationMode::NegPos},
            };
            for (const auto& [label, mode] : modes) {
                try {
                    const auto reg = colocation_regression(diff, mode);
                    colocation << year << ',' << label << ',' << fmt_weight(reg.slope) << ','
                               << fmt_weight(reg.intercept) << ',' << fmt_weight(reg.r_squared)
                               << ',' << reg.sample_count << '\n';
                } catch (const std::exception&) {
                    colocation << year << ',' << label << ",NA,NA,NA,0\n";
                }
            }

            for (const auto& [pos_or_neg, dnet] :
                 {std::pair<const char*, const WeightedNetwork*>{"pos", &diff.positive},
                  std::pair<const char*, const WeightedNetwork*>{"neg", &diff.negative}}) {
                if (dnet->edge_count() == 0) continue;
                const auto grid = make_threshold_grid(*dnet, settings.grid_points);
                const auto profile = compare_to_null(*dnet, ens, grid);
                const fs::path p = out_dir / ("profile_diff" + std::string(pos_or_neg) + "_" + ys + ".csv");
                detail::write_profile_csv(profile, p);
                manifest.record(out_dir, p);
                try {
                    const fs::path c = out_dir / ("core_diff" + std::string(pos_or_neg) + "_" + ys + ".txt");
                    detail::write_core_txt(inner_core(*dnet, settings.core_target, grid), c);
                    manifest.record(out_dir, c);
                } catch (const NumericError&) {
                    // degenerate difference network without a qualifying core
                }
            }

            std::vector<std::pair<double, double>> pos, neg;
            scaling_samples(diff, *nets.first, pos, neg);
            try {
                const auto fits = diff_vs_reference_scaling(diff, *nets.first);
                scaling_json["per_year"][ys] = {
                    {"positive", {{"alpha", fits.positive.exponent},
                                  {"amplitude", fits.positive.amplitude},
                                  {"r_squared", fits.positive.r_squared},
                                  {"points", fits.positive.points}}},
                    {"negative", {{"alpha", fits.negative.exponent},
                                  {"amplitude", fits.negative.amplitude},
                                  {"r_squared", fits.negative.r_squared},
                                  {"points", fits.negative.points}}}};
            } catch (const std::exception& e) {
                scaling_json["per_year"][ys]["error"] = e.what();
            }
            pooled_pos.insert(pooled_pos.end(), pos.begin(), pos.end());
            pooled_neg.insert(pooled_neg.end(), neg.begin(), neg.end());
        }
        colocation.close();
        manifest.record(out_dir, out_dir / "colocation.csv");

        for (const auto& [branch, samples] :
             {std::pair<const char*, std::vector<std::pair<double, double>>*>{"positive", &pooled_pos},
              std::pair<const char*, std::vector<std::pair<double, double>>*>{"negative", &pooled_neg}}) {
            try {
                const auto fit = fit_scaling(*samples);
                scaling_json["pooled"][branch] = {{"alpha", fit.exponent},
                                                  {"amplitude", fit.amplitude},
                                                  {"r_squared", fit.r_squared},
                                                  {"points", fit.points}};
            } catch (const std::exception& e) {
                scaling_json["pooled"][branch] = {{"error", e.what()}};
            }
        }
        {
            std::ofstream out(out_dir / "scaling.json");
            out << scaling_json.dump(2) << '\n';
        }
        manifest.record(out_dir, out_dir / "scaling.json");
        {
            std::ofstream out(out_dir / "metrics.json");
            out << all_metrics.dump(2) << '\n';
        }
        manifest.record(out_dir, out_dir / "metrics.json");

        manifest.complete = true;
        manifest.write(out_dir / "manifest.json");
    } catch (const std::exception& e) {
        manifest.failure = e.what();
        manifest.write(out_dir / "manifest.json");
        throw;
    }
    return manifest;
}

}  // namespace conet
