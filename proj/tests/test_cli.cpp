#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "rsgraph/cli.hpp"

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun run(std::initializer_list<const char*> args) {
    std::vector<const char*> argv{"rsgraph"};
    argv.insert(argv.end(), args.begin(), args.end());
    std::ostringstream out, err;
    CliRun r;
    r.code = rsg::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string temp_prefix(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("build box emits the pinned report") {
    const CliRun r = run({"build", "box", "--dim", "1", "--m", "2"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["params"]["n"] == 3);
    CHECK(j["counts"]["A0"] == 7);
    CHECK(j["counts"]["classes"] == 3);
    CHECK(j["counts"]["A"] == 4);
    CHECK(j["graph"]["edges"] == 12);
    CHECK(j["graph"]["triangles"] == 4);
    CHECK(j["graph"]["verified"] == true);
}

TEST_CASE("build box rejects an odd M with a usage message") {
    const CliRun r = run({"build", "box", "--dim", "1", "--m", "3"});
    CHECK(r.code == 1);
    CHECK(r.err.find("usage error") != std::string::npos);
    CHECK(r.err.find("even") != std::string::npos);
}

TEST_CASE("unknown flags are rejected") {
    const CliRun r = run({"build", "box", "--dim", "1", "--m", "2", "--no-such-flag"});
    CHECK(r.code == 1);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("build ball is deterministic and honors --out") {
    const std::string prefix = temp_prefix("rsgraph_cli_ball");
    const CliRun a = run({"build", "ball", "--dim", "1", "--n", "5", "--seed", "1", "--samples",
                          "20000", "--out", prefix.c_str()});
    REQUIRE(a.code == 0);
    const CliRun b = run({"build", "ball", "--dim", "1", "--n", "5", "--seed", "1", "--samples",
                          "20000", "--out", prefix.c_str()});
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(slurp(prefix + ".json"));
    CHECK(j["graph"]["verified"] == true);
    CHECK(nlohmann::json::parse(a.out) == j);

    SUBCASE("verify accepts the fresh graph file") {
        const CliRun v = run({"verify", (prefix + ".edgelist").c_str()});
        CHECK(v.code == 0);
        CHECK(v.out.find("ok") != std::string::npos);
    }
    SUBCASE("verify flags an injected diamond with exit 2") {
        // duplicate an existing triangle onto a padded dummy vertex: the edge
        // (a, b) of the first triple then lies in two triangles
        std::ifstream in(prefix + ".edgelist");
        std::string header;
        std::getline(in, header);
        std::istringstream hs(header);
        std::string magic;
        unsigned p1, p2, p3, padded;
        std::size_t edges, triples;
        hs >> magic >> p1 >> p2 >> p3 >> padded >> edges >> triples;
        REQUIRE(triples >= 1);
        std::vector<std::string> lines;
        std::string line;
        while (std::getline(in, line)) lines.push_back(line);
        in.close();
        // first triple line
        std::string tline;
        for (const auto& l : lines)
            if (l[0] == 't') {
                tline = l;
                break;
            }
        REQUIRE_FALSE(tline.empty());
        std::istringstream ts(tline);
        char tag;
        unsigned ta, tb, tc;
        ts >> tag >> ta >> tb >> tc;
        const unsigned dummy = padded;  // append one extra vertex
        const std::string tampered = prefix + "_tampered.edgelist";
        std::ofstream outf(tampered);
        outf << "rs-graph " << p1 << " " << p2 << " " << p3 << " " << padded + 1 << " "
             << edges + 2 << " " << triples + 1 << "\n";
        for (const auto& l : lines)
            if (l[0] == 'e') outf << l << "\n";
        outf << "e " << ta << " " << dummy << "\n";
        outf << "e " << tb << " " << dummy << "\n";
        for (const auto& l : lines)
            if (l[0] == 't') outf << l << "\n";
        outf << "t " << ta << " " << tb << " " << dummy << "\n";
        outf.close();
        const CliRun v = run({"verify", tampered.c_str()});
        CHECK(v.code == 2);
        CHECK(v.out.find("diamond") != std::string::npos);
        std::remove(tampered.c_str());
    }
    SUBCASE("verify reports a truncated file as a format error") {
        const std::string truncated = prefix + "_truncated.edgelist";
        const std::string full = slurp(prefix + ".edgelist");
        std::ofstream outf(truncated);
        outf << full.substr(0, full.size() / 2);
        outf.close();
        const CliRun v = run({"verify", truncated.c_str()});
        CHECK(v.code == 1);
        CHECK(v.err.find("line") != std::string::npos);
        std::remove(truncated.c_str());
    }
    std::remove((prefix + ".edgelist").c_str());
    std::remove((prefix + ".json").c_str());
}

TEST_CASE("build exceeds budgets with exit 3") {
    const CliRun r = run({"build", "ball", "--dim", "2", "--n", "500", "--budget-points", "10"});
    CHECK(r.code == 3);
    CHECK(r.err.find("budget") != std::string::npos);
}

TEST_CASE("build --format edgelist streams the graph text") {
    const CliRun r = run({"build", "box", "--dim", "1", "--m", "2", "--format", "edgelist"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("rs-graph 3 3 2 9 12 4\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1 + 12 + 4);
}

TEST_CASE("build output is byte-identical across thread counts") {
    const CliRun a = run({"build", "ball", "--dim", "2", "--n", "120", "--seed", "5",
                          "--samples", "50000", "--threads", "1"});
    const CliRun b = run({"build", "ball", "--dim", "2", "--n", "120", "--seed", "5",
                          "--samples", "50000", "--threads", "3"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("prob subcommand") {
    SUBCASE("ball closure in dimension 1") {
        const CliRun r =
            run({"prob", "--ball", "--dim", "1", "--samples", "1000000", "--seed", "7"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        const double value = j["value"];
        const double se = j["stderr"];
        CHECK(std::abs(value - 0.75) <= 4 * se);
        CHECK(j["method"] == "monte-carlo");
    }
    SUBCASE("exact box fraction") {
        const CliRun r = run({"prob", "--box", "--m", "1"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["num"] == 7);
        CHECK(j["den"] == 9);
        CHECK(j["method"] == "exact");
    }
    SUBCASE("sphere quadrature") {
        const CliRun r = run({"prob", "--sphere-exact", "--dim", "3"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(std::abs(j["value"].get<double>() - 0.25) <= 1e-9);
    }
    SUBCASE("csv rendering") {
        const CliRun r = run({"prob", "--box", "--m", "2", "--format", "csv"});
        REQUIRE(r.code == 0);
        CHECK(r.out.rfind("op,dim,m,samples,seed,value,stderr,method\n", 0) == 0);
    }
    SUBCASE("lower-bound quadrature") {
        const CliRun r = run({"prob", "--lower-bound", "--dim", "2"});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(std::abs(j["value"].get<double>() - 5.0 / 24.0) <= 1e-9);
    }
    SUBCASE("exactly one mode required") {
        CHECK(run({"prob", "--ball", "--box", "--dim", "1"}).code == 1);
        CHECK(run({"prob", "--dim", "1"}).code == 1);
    }
}

TEST_CASE("curves subcommand surfaces the improved-curve optimum") {
    const CliRun r = run({"curves", "--n", "1000000"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["optima"]["new"]["D"] == 14);
    CHECK(j["constants"]["c_new"].get<double>() == doctest::Approx(1.6601).epsilon(1e-4));
    CHECK(j["constants"]["c_old"].get<double>() == doctest::Approx(0.8301).epsilon(1e-4));
    bool found = false;
    for (const auto& row : j["rows"])
        if (row["D"] == 14) {
            CHECK(row["opt_new"] == true);
            found = true;
        }
    CHECK(found);

    const CliRun c = run({"curves", "--n", "1000000", "--format", "csv"});
    REQUIRE(c.code == 0);
    CHECK(c.out.find("n,D,behrend,green,new,opt_behrend,opt_green,opt_new") != std::string::npos);

    const CliRun d = run({"curves", "--n", "100000", "--epsilon", "0.001"});
    REQUIRE(d.code == 0);
    const auto dj = nlohmann::json::parse(d.out);
    CHECK(dj["delta"]["new"]["n_max"].get<std::int64_t>() >= 1);
}

TEST_CASE("sweep subcommand emits the pinned CSV table") {
    const CliRun r = run({"sweep", "--kind", "box", "--dims", "1,2", "--ms", "2,4", "--format",
                          "csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("kind,D,n,M,seed,A0,classes,A,edges,triangles,eta_lower,"
                      "theory_behrend,theory_green,theory_new,verified\n",
                      0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
    CHECK(r.out.find("box,1,3,2,0,7,3,4,12,4,") != std::string::npos);

    const CliRun j = run({"sweep", "--kind", "abstract", "--ns", "5,10", "--format", "json"});
    REQUIRE(j.code == 0);
    const auto jj = nlohmann::json::parse(j.out);
    CHECK(jj["cells"].size() == 2);
}

TEST_CASE("help and missing subcommand") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
}
