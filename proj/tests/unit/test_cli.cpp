#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

struct Sandbox {
    fs::path dir;
    Sandbox() : dir(fs::temp_directory_path() / ("stav_cli_" + std::to_string(::getpid()))) { fs::create_directories(dir); }
    ~Sandbox() { fs::remove_all(dir); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome stav(const std::string& args) {
    static const Sandbox box;
    const auto err = box.file("stderr.txt");
    const std::string cmd = std::string(STAV_BINARY) + " " + args + " 2>" + err;
    Outcome o;
    FILE* pipe = popen(cmd.c_str(), "r");
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) o.out.append(buf.data(), n);
    const int status = pclose(pipe);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.err = slurp(err);
    return o;
}

}  // namespace

TEST(Cli, TraceExample) {
    const auto o = stav("trace --p 7 --a 2 --b 3");
    EXPECT_EQ(o.code, 0);
    EXPECT_EQ(o.out, "p=7 a=2 b=3 lambda=2\n");
}

TEST(Cli, ClassNumberExample) {
    EXPECT_EQ(stav("classno --D -16").out, "D=-16 H=2\n");
    EXPECT_EQ(stav("classno --D -16 --mode lseries").out, "D=-16 H=2\n");
}

TEST(Cli, MainTermExample) {
    const auto o = stav("mainterm --x 10 --alpha 0.3 --beta 0.9");
    EXPECT_EQ(o.code, 0);
    const auto pos = o.out.find("main_term=");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_NEAR(std::stod(o.out.substr(pos + 10)), 2.0515, 1e-4);
}

TEST(Cli, DomainErrorsExitOne) {
    for (const char* args : {"trace --p 5 --a 2 --b 3", "classno --D 5", "trace --p 8 --a 1 --b 1",
                             "bdh --x 10 --y 10 --q 4 --a 2", "mainterm --alpha 0.9 --beta 0.1", "", "trace --bogus 1",
                             "average --x 600 --path per_residue"}) {
        const auto o = stav(args);
        EXPECT_EQ(o.code, 1) << args;
        EXPECT_EQ(o.err.rfind("error kind=", 0), 0u) << args;
        EXPECT_EQ(std::count(o.err.begin(), o.err.end(), '\n'), 1) << args;
    }
}

TEST(Cli, CorruptCacheExitsTwoNamingRecord) {
    Sandbox box;
    const auto dir = box.file("cache");
    ASSERT_EQ(stav("htable --x 300 --cache " + dir).code, 0);
    const auto path = dir + "/htable_300.stav";
    std::string bytes = slurp(path);
    bytes[14 + 16 * 40 + 12] ^= 0x05;
    std::ofstream(path, std::ios::binary | std::ios::trunc) << bytes;
    const auto o = stav("verify --suite exact --cache " + dir);
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("(p="), std::string::npos);
    EXPECT_NE(o.err.find(", r="), std::string::npos);
    EXPECT_EQ(stav("mainterm --x 300 --cache " + dir).code, 2);
}

TEST(Cli, CacheIsReused) {
    Sandbox box;
    const auto dir = box.file("cache");
    const auto first = stav("mainterm --x 400 --cache " + dir);
    ASSERT_TRUE(fs::exists(dir + "/htable_400.stav"));
    EXPECT_EQ(stav("mainterm --x 400 --cache " + dir).out, first.out);
    EXPECT_EQ(stav("mainterm --x 400").out, first.out);
}

TEST(Cli, WorkerCountDoesNotChangeCsv) {
    Sandbox box;
    const std::string common = "variance --x 400 --A 7 --B 6 --backend bsgs --out ";
    ASSERT_EQ(stav(common + box.file("w1.csv") + " --workers 1").code, 0);
    ASSERT_EQ(stav(common + box.file("w8.csv") + " --workers 8").code, 0);
    EXPECT_EQ(slurp(box.file("w1.csv")), slurp(box.file("w8.csv")));
    EXPECT_GT(slurp(box.file("w1.csv")).size(), 50u);
}

TEST(Cli, JsonMatchesCsv) {
    Sandbox box;
    const std::string common = "average --x 300 --A 5 --B 5 --rel-tol 0.3 ";
    ASSERT_EQ(stav(common + "--out " + box.file("r.csv")).code, 0);
    ASSERT_EQ(stav(common + "--format json --out " + box.file("r.json")).code, 0);
    std::istringstream csv(slurp(box.file("r.csv")));
    std::string comment, header, row;
    std::getline(csv, comment);
    std::getline(csv, header);
    std::getline(csv, row);
    EXPECT_EQ(comment[0], '#');
    const auto j = nlohmann::json::parse(slurp(box.file("r.json")));
    std::istringstream hs(header), rs(row);
    std::string col, cell;
    int compared = 0;
    while (std::getline(hs, col, ',') && std::getline(rs, cell, ',')) {
        EXPECT_EQ(std::stod(cell), j["rows"][0][col].get<double>()) << col;
        ++compared;
    }
    EXPECT_EQ(compared, 11);
}

TEST(Cli, ConfigPrecedence) {
    Sandbox box;
    std::ofstream(box.file("cfg.json")) << R"({"x": 10, "alpha": 0.3, "beta": 0.5})";
    const auto from_config = stav("mainterm --config " + box.file("cfg.json"));
    EXPECT_NE(from_config.out.find("x=10 alpha=0.3 beta=0.5 "), std::string::npos);
    const auto flag_wins = stav("mainterm --config " + box.file("cfg.json") + " --beta 0.9");
    EXPECT_EQ(flag_wins.out.rfind("x=10 alpha=0.3 beta=0.9 main_term=2.0515207618532134", 0), 0u);
    std::ofstream(box.file("bad.json")) << R"({"bogus": 1})";
    EXPECT_EQ(stav("mainterm --config " + box.file("bad.json")).code, 1);
}

TEST(Cli, TabularOutputs) {
    EXPECT_NE(stav("kr --r 2 --cutoff 1000").out.find("r,cutoff,K_r,tail_bound\n2,1000,"), std::string::npos);
    EXPECT_NE(stav("bdh --x 10 --y 10 --Q 2").out.find("Q,y,moment\n2,10,1.09667"), std::string::npos);
    EXPECT_NE(stav("bdh --x 10 --y 10 --q 4 --a 1").out.find("q,a,theta,E\n4,1,5.398"), std::string::npos);
    EXPECT_EQ(stav("cfr --n 3 --f 1 --r 1").out, "n=3 f=1 r=1 c=-1\n");
    EXPECT_NE(stav("htable --x 7 --format csv").out.find("p,r,D,H\n2,1,-7,1\n"), std::string::npos);
    EXPECT_NE(stav("trace --x 20 --a 2 --b 3 --format csv").out.find("p,a,b,lambda\n3,2,3,0\n7,2,3,2\n"),
              std::string::npos);
    EXPECT_EQ(stav("sieve --x 100").out, "x=100 primes=25\n");
}

TEST(Cli, VerifyExactSuitePasses) {
    const auto o = stav("verify --suite exact");
    EXPECT_EQ(o.code, 0) << o.out << o.err;
    EXPECT_EQ(o.out.find("FAIL"), std::string::npos);
}
