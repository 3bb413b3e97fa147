#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "conet/io.hpp"
#include "conet/pipeline.hpp"
#include "fixtures.hpp"

using namespace conet;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& leaf) {
    const auto dir = fs::temp_directory_path() / "conet_tests" / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string pipeline_config(const fs::path& data_dir, std::size_t replicates = 10,
                            std::size_t grid = 60) {
    std::ostringstream cfg;
    cfg << "[corpus]\n"
        << "corpus=" << (data_dir / "corpus.tsv").string() << "\n"
        << "ranking=" << (data_dir / "ranking.tsv").string() << "\n"
        << "years=1999\nmonth=6\ncutoff=0.10\n"
        << "[null]\nreplicates=" << replicates << "\nseed=42\n"
        << "[community]\nseeds=5\n"
        << "[decompose]\ntarget=10\ngrid_points=" << grid << "\n"
        << "[dist]\nbins=20\n";
    return cfg.str();
}

}  // namespace

TEST_CASE("network directory round-trips exactly") {
    const auto dir = temp_dir("roundtrip");
    auto net = fixtures::random_network(12, 0.4, 5);
    net.meta().tier = "I";
    net.meta().year = 1999;
    net.meta().doc_count = 123;
    write_network_dir(net, dir);
    const auto back = read_network_dir(dir);
    CHECK(back.meta().tier == "I");
    CHECK(back.meta().year == 1999);
    CHECK(back.meta().doc_count == 123);
    CHECK(back.nodes() == net.nodes());
    for (std::size_t i = 0; i < net.size(); ++i)
        for (std::size_t j = 0; j < net.size(); ++j)
            CHECK(back.weight(i, j) == Catch::Approx(net.weight(i, j)).margin(1e-12));
}

TEST_CASE("writing the same network twice is byte-identical") {
    const auto d1 = temp_dir("stable1");
    const auto d2 = temp_dir("stable2");
    const auto net = fixtures::random_network(10, 0.5, 9);
    write_network_dir(net, d1);
    write_network_dir(net, d2);
    for (const auto leaf : {"edges.tsv", "nodes.tsv", "meta.json"})
        CHECK(slurp(d1 / leaf) == slurp(d2 / leaf));
}

TEST_CASE("graphml and partition files agree with the network") {
    const auto dir = temp_dir("graphml");
    const auto net = fixtures::connected_random_network(8, 0.5, 3);
    const auto part = louvain(net, 42);
    write_graphml(net, dir / "net.graphml", &part);
    write_partition(net, part, dir / "partition.tsv");

    const auto xml = slurp(dir / "net.graphml");
    for (const auto& code : net.nodes())
        CHECK(xml.find("<node id=\"" + code + "\"") != std::string::npos);
    std::size_t edge_tags = 0, from = 0;
    while ((from = xml.find("<edge ", from)) != std::string::npos) {
        ++edge_tags;
        ++from;
    }
    CHECK(edge_tags == net.edge_count());

    std::ifstream pf(dir / "partition.tsv");
    std::string header;
    std::getline(pf, header);
    CHECK(header == "code\tcommunity");
    std::string code;
    int comm;
    std::size_t rows = 0;
    while (pf >> code >> comm) {
        CHECK(comm == part.community[net.index_of(code)]);
        ++rows;
    }
    CHECK(rows == net.size());
}

TEST_CASE("config parsing, defaults and hashing") {
    std::istringstream in(
        "# comment\n"
        "[corpus]\n"
        "corpus = /tmp/c.tsv\n"
        "cutoff=0.10\n"
        "[null]\n"
        "replicates = 25\n");
    const auto cfg = Config::from_stream(in);
    CHECK(cfg.require("corpus.corpus") == "/tmp/c.tsv");
    CHECK(cfg.get_double("corpus.cutoff", 0.0) == 0.10);
    CHECK(cfg.get_int("null.replicates", 0) == 25);
    CHECK(cfg.get_int("null.seed", 42) == 42);  // fallback
    CHECK_THROWS_AS(cfg.require("corpus.ranking"), ConfigError);

    std::istringstream same(
        "[corpus]\ncorpus = /tmp/c.tsv\ncutoff=0.10\n[null]\nreplicates = 25\n");
    CHECK(Config::from_stream(same).hash() == cfg.hash());
    std::istringstream differs(
        "[corpus]\ncorpus = /tmp/c.tsv\ncutoff=0.11\n[null]\nreplicates = 25\n");
    CHECK(Config::from_stream(differs).hash() != cfg.hash());

    std::istringstream bad("[corpus\nx=1\n");
    CHECK_THROWS_AS(Config::from_stream(bad), ConfigError);
    std::istringstream noeq("[corpus]\njust a line\n");
    CHECK_THROWS_AS(Config::from_stream(noeq), ConfigError);
}

TEST_CASE("pipeline settings read sections with defaults") {
    std::istringstream in(
        "[corpus]\ncorpus=c.tsv\nranking=r.tsv\nyears=1999,2010\n"
        "[null]\nmode=existing-links\n");
    const auto s = PipelineSettings::from_config(Config::from_stream(in));
    CHECK(s.years == std::vector<int>{1999, 2010});
    CHECK(s.month == 6);
    CHECK(s.cutoff == 0.10);
    CHECK(s.replicates == 100);
    CHECK(s.rewire_mode == RewireMode::ExistingLinks);
    CHECK(s.seed == 42);
    CHECK(s.grid_points == 400);

    std::istringstream bad("[corpus]\ncorpus=c\nranking=r\nyears=1999\n[null]\nmode=nope\n");
    CHECK_THROWS_AS(PipelineSettings::from_config(Config::from_stream(bad)), ConfigError);
}

TEST_CASE("file digest distinguishes content and manifest records it") {
    const auto dir = temp_dir("digest");
    fixtures::write_file(dir / "a.txt", "hello\n");
    fixtures::write_file(dir / "b.txt", "hello\n");
    fixtures::write_file(dir / "c.txt", "other\n");
    CHECK(file_digest(dir / "a.txt") == file_digest(dir / "b.txt"));
    CHECK(file_digest(dir / "a.txt") != file_digest(dir / "c.txt"));

    RunManifest m;
    m.config_hash = "deadbeef";
    m.seed = 7;
    m.record(dir, dir / "a.txt");
    m.complete = true;
    m.write(dir / "manifest.json");
    const auto text = slurp(dir / "manifest.json");
    CHECK(text.find("a.txt") != std::string::npos);
    CHECK(text.find(hex64(file_digest(dir / "a.txt"))) != std::string::npos);
}

TEST_CASE("full pipeline produces the artifact set and a complete manifest") {
    const auto data = temp_dir("pipe_data");
    const auto out = temp_dir("pipe_out");
    const auto ledger = fixtures::synthetic_corpus(1200, 11);
    fixtures::write_file(data / "corpus.tsv", ledger.corpus_tsv);
    fixtures::write_file(data / "ranking.tsv", ledger.ranking_tsv);
    std::istringstream cfg_in(pipeline_config(data));
    const auto manifest = run_pipeline(Config::from_stream(cfg_in), out);

    CHECK(manifest.complete);
    CHECK(manifest.failure.empty());
    for (const auto leaf :
         {"metrics.json", "rankings.tsv", "colocation.csv", "scaling.json", "manifest.json",
          "removed_nodes.txt"})
        CHECK(fs::exists(out / leaf));
    for (const auto net_dir : {"net_I_1999", "net_NI-6_1999"}) {
        for (const auto leaf : {"edges.tsv", "nodes.tsv", "meta.json", "partition.tsv",
                                "cat_strengths.tsv", "profile.csv", "core.txt", "dist_links.csv",
                                "dist_nodes.csv", "network.graphml"})
            CHECK(fs::exists(out / net_dir / leaf));
    }
    CHECK((fs::exists(out / "net_diffpos_1999") && fs::exists(out / "net_diffneg_1999")));

    // every recorded artifact digest matches the file on disk
    for (const auto& [rel, digest] : manifest.artifacts)
        CHECK(digest == hex64(file_digest(out / rel)));
}

TEST_CASE("two pipeline runs from the same inputs are byte-identical") {
    const auto data = temp_dir("pipe_det_data");
    const auto out1 = temp_dir("pipe_det_1");
    const auto out2 = temp_dir("pipe_det_2");
    const auto ledger = fixtures::synthetic_corpus(800, 29);
    fixtures::write_file(data / "corpus.tsv", ledger.corpus_tsv);
    fixtures::write_file(data / "ranking.tsv", ledger.ranking_tsv);
    std::istringstream a(pipeline_config(data, 6, 40));
    std::istringstream b(pipeline_config(data, 6, 40));
    const auto m1 = run_pipeline(Config::from_stream(a), out1);
    const auto m2 = run_pipeline(Config::from_stream(b), out2);
    REQUIRE(m1.artifacts.size() == m2.artifacts.size());
    for (const auto& [rel, digest] : m1.artifacts) {
        REQUIRE(m2.artifacts.count(rel) == 1);
        CHECK(m2.artifacts.at(rel) == digest);
        CHECK(slurp(out1 / rel) == slurp(out2 / rel));
    }
}

TEST_CASE("pipeline fails cleanly when an input is missing") {
    const auto data = temp_dir("pipe_missing");
    const auto out = temp_dir("pipe_missing_out");
    std::istringstream cfg_in(pipeline_config(data));
    CHECK_THROWS_AS(run_pipeline(Config::from_stream(cfg_in), out), ConfigError);
    // the partial manifest still lands, marked incomplete with a failure note
    REQUIRE(fs::exists(out / "manifest.json"));
    const auto text = slurp(out / "manifest.json");
    CHECK(text.find("\"complete\": false") != std::string::npos);
    CHECK(text.find("failure") != std::string::npos);
}

TEST_CASE("labels file is read and threaded into nodes.tsv") {
    const auto dir = temp_dir("labels");
    fixtures::write_file(dir / "labels.tsv",
                         "C01.100\tAlpha label\n# comment\nC01.101\tBeta label\n");
    const auto labels = read_labels(dir / "labels.tsv");
    REQUIRE(labels.size() == 2);
    CHECK(labels.at("C01.100") == "Alpha label");

    WeightedNetwork net({"C01.100", "C01.101"});
    net.set_weight(0, 1, 0.5);
    write_network_dir(net, dir / "net", labels);
    CHECK(slurp(dir / "net" / "nodes.tsv").find("Alpha label") != std::string::npos);
}
