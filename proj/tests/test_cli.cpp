#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "oneway/generators.hpp"
#include "oneway/io.hpp"
#include "oneway/rectangles.hpp"

using namespace oneway;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    const char* bin = std::getenv("ONEWAY_CLI");
    REQUIRE_MESSAGE(bin != nullptr, "ONEWAY_CLI must point at the oneway binary");
    const std::string cmd = std::string(bin) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    std::array<char, 4096> buf{};
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe))
        res.out.append(buf.data(), n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

bool contains_line(const std::string& text, const std::string& line) {
    std::istringstream in(text);
    std::string cur;
    while (std::getline(in, cur))
        if (cur == line) return true;
    return false;
}

std::string slurp(const std::string& path) {
    return read_text_file(path);
}

struct TempDir {
    std::string path;
    TempDir() {
        char tmpl[] = "/tmp/oneway_cli_XXXXXX";
        path = mkdtemp(tmpl);
    }
    std::string file(const std::string& name) const { return path + "/" + name; }
};

} // namespace

TEST_CASE("bench gen + measure vc prints vc=1 for GT_4") {
    TempDir dir;
    const auto gen = run_cli("bench gen --kind gt --n 4 --out " + dir.file("gt4.json"));
    CHECK(gen.exit_code == 0);
    const auto vc = run_cli("measure vc --fn " + dir.file("gt4.json"));
    CHECK(vc.exit_code == 0);
    CHECK(contains_line(vc.out, "vc=1"));
}

TEST_CASE("measure mi on a product distribution prints mi_bits=0.0") {
    TempDir dir;
    const auto d = JointDistribution::product({0.25, 0.75}, {0.5, 0.3, 0.2});
    save_distribution(d, dir.file("product.json"));
    const auto mi = run_cli("measure mi --dist " + dir.file("product.json"));
    CHECK(mi.exit_code == 0);
    CHECK(contains_line(mi.out, "mi_bits=0.0"));
}

TEST_CASE("measure rec --exact on XOR uniform prints rec_bits=1.0") {
    TempDir dir;
    FunctionTable f(2, 2, 2, false);
    f.at(0, 1) = 1;
    f.at(1, 0) = 1;
    save_function(f, dir.file("xor.json"));
    save_distribution(JointDistribution::uniform(2, 2), dir.file("uniform.json"));
    const auto rec = run_cli("measure rec --fn " + dir.file("xor.json") + " --dist " +
                             dir.file("uniform.json") + " --eps 0.1 --exact");
    CHECK(rec.exit_code == 0);
    CHECK(contains_line(rec.out, "rec_bits=1.0"));
}

TEST_CASE("emitted certificates re-validate through the library") {
    TempDir dir;
    save_function(make_benchmark(BenchmarkKind::IP, 3), dir.file("ip3.json"));
    const auto res = run_cli("--json " + dir.file("rec.json") + " measure rec --fn " +
                             dir.file("ip3.json") + " --eps 0.1 --exact");
    REQUIRE(res.exit_code == 0);
    const auto payload = slurp(dir.file("rec.json"));
    const auto start = payload.find("\"certificate\"");
    REQUIRE(start != std::string::npos);
    // Pull the certificate object back out and re-verify it.
    const auto obj_start = payload.find('{', start);
    int depth = 0;
    std::size_t end = obj_start;
    for (; end < payload.size(); ++end) {
        if (payload[end] == '{') ++depth;
        if (payload[end] == '}' && --depth == 0) break;
    }
    const auto cert = RectangleCertificate::from_json(
        payload.substr(obj_start, end - obj_start + 1));
    CHECK(certificate_valid(cert, make_benchmark(BenchmarkKind::IP, 3),
                            JointDistribution::uniform(8, 8)));
}

TEST_CASE("protocol run CSV is byte-identical across reruns with one seed") {
    TempDir dir;
    save_function(make_benchmark(BenchmarkKind::GT, 3), dir.file("gt3.json"));
    save_distribution(JointDistribution::uniform(8, 8), dir.file("u.json"));
    const auto a = run_cli("--csv " + dir.file("a.csv") + " protocol run --fn " +
                           dir.file("gt3.json") + " --dist " + dir.file("u.json") +
                           " --eps 0.2 --trials 500 --seed 77 --m 6");
    const auto b = run_cli("--csv " + dir.file("b.csv") + " protocol run --fn " +
                           dir.file("gt3.json") + " --dist " + dir.file("u.json") +
                           " --eps 0.2 --trials 500 --seed 77 --m 6");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
    const auto csv = slurp(dir.file("a.csv"));
    CHECK(csv.rfind("fn,dist,eps,m,mode,truncate,mean_m1_bits,max_m1_bits,m2_bits,"
                    "error_rate,abort_rate,mi_bits,vc_or_pdim\n", 0) == 0);
    // A different thread count must not change the aggregate.
    const auto c = run_cli("--csv " + dir.file("c.csv") + " --threads 4 protocol run --fn " +
                           dir.file("gt3.json") + " --dist " + dir.file("u.json") +
                           " --eps 0.2 --trials 500 --seed 77 --m 6");
    REQUIRE(c.exit_code == 0);
    CHECK(slurp(dir.file("c.csv")) == csv);
}

TEST_CASE("extractor audit CSV columns and threshold") {
    TempDir dir;
    save_function(make_benchmark(BenchmarkKind::IP, 4), dir.file("ip4.json"));
    const auto res = run_cli("--csv " + dir.file("audit.csv") + " extractor audit --fn " +
                             dir.file("ip4.json") + " --eps 0.25");
    REQUIRE(res.exit_code == 0);
    const auto csv = slurp(dir.file("audit.csv"));
    CHECK(csv.rfind("k,bias,is_strong,rec_value,margin\n", 0) == 0);
    CHECK(contains_line(res.out, "threshold_k=2"));
}

TEST_CASE("quantum check suites pass with zero violations") {
    for (const std::string suite : {"helstrom", "holevo", "largeinf", "fano", "ssmall"}) {
        const auto res = run_cli("quantum check --suite " + suite + " --trials 25 --seed 5");
        CAPTURE(suite); CAPTURE(res.out);
        CHECK(res.exit_code == 0);
        CHECK(contains_line(res.out, "violations=0"));
    }
}

TEST_CASE("exit codes: 1 for validation, 2 for caps") {
    TempDir dir;
    const auto missing = run_cli("measure vc --fn " + dir.file("nope.json"));
    CHECK(missing.exit_code == 1);

    FunctionTable bad(2, 2, 2, false);
    bad.at(0, 0) = 1;
    save_function(bad, dir.file("f.json"));
    std::ofstream(dir.file("broken.json")) << "{\"x_size\": 2}";
    const auto broken = run_cli("measure vc --fn " + dir.file("broken.json"));
    CHECK(broken.exit_code == 1);

    const auto npm_too_big = run_cli("bench gen --kind npm --n 9 --out " + dir.file("npm.json"));
    CHECK(npm_too_big.exit_code == 2);
}

TEST_CASE("protocol calibrate reports a working m") {
    TempDir dir;
    save_function(make_benchmark(BenchmarkKind::GT, 3), dir.file("gt3.json"));
    save_distribution(JointDistribution::uniform(8, 8), dir.file("u.json"));
    const auto res = run_cli("protocol calibrate --fn " + dir.file("gt3.json") + " --dist " +
                             dir.file("u.json") + " --eps 0.25 --trials 400 --seed 11");
    REQUIRE(res.exit_code == 0);
    CHECK(res.out.find("m=") != std::string::npos);
    CHECK(res.out.find("error_rate=") != std::string::npos);
}
