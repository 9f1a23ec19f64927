#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef BSM_CLI_PATH
#error "BSM_CLI_PATH must point at the built CLI binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
    std::string stderr_text;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    std::string out_path = "/tmp/bsm_cli_out_" + std::to_string(counter);
    std::string err_path = "/tmp/bsm_cli_err_" + std::to_string(counter);
    ++counter;
    std::string cmd = std::string(BSM_CLI_PATH) + " " + args + " >" + out_path + " 2>" + err_path;
    int status = std::system(cmd.c_str());

    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    };
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.stdout_text = slurp(out_path);
    r.stderr_text = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::string tmp(const std::string& name) { return "/tmp/bsm_cli_" + name; }

void write_bytes(const std::string& path, const std::vector<uint8_t>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
}

std::vector<uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("keygen is deterministic and validates parameters") {
    auto a = run_cli("keygen --n 8 --k 4 --seed fixed --out " + tmp("k1.bsmk"));
    CHECK(a.exit_code == 0);
    auto b = run_cli("keygen --n 8 --k 4 --seed fixed --out " + tmp("k2.bsmk"));
    CHECK(b.exit_code == 0);
    CHECK(read_bytes(tmp("k1.bsmk")) == read_bytes(tmp("k2.bsmk")));

    auto bad = run_cli("keygen --n 8 --k 0 --seed fixed --out " + tmp("k3.bsmk"));
    CHECK(bad.exit_code == 2);

    auto missing = run_cli("keygen --n 8 --seed fixed --out " + tmp("k4.bsmk"));
    CHECK(missing.exit_code == 2);
}

TEST_CASE("encrypt/decrypt round trip through files") {
    REQUIRE(run_cli("gen-randomness --n 64 --k 4 --seed alpha --out " + tmp("a.bsma")).exit_code ==
            0);
    REQUIRE(run_cli("keygen --n 64 --k 4 --seed key --out " + tmp("k.bsmk")).exit_code == 0);

    std::vector<uint8_t> msg = {0x12, 0x34, 0x56, 0x78};
    write_bytes(tmp("msg.bin"), msg);
    auto enc = run_cli("encrypt --alpha " + tmp("a.bsma") + " --key " + tmp("k.bsmk") + " --in " +
                       tmp("msg.bin") + " --out " + tmp("ct.bin"));
    CHECK(enc.exit_code == 0);
    CHECK(read_bytes(tmp("ct.bin")) != msg);

    auto dec = run_cli("decrypt --alpha " + tmp("a.bsma") + " --key " + tmp("k.bsmk") + " --in " +
                       tmp("ct.bin") + " --out " + tmp("pt.bin"));
    CHECK(dec.exit_code == 0);
    CHECK(read_bytes(tmp("pt.bin")) == msg);
}

TEST_CASE("explicit --bits encrypts a partial final byte") {
    REQUIRE(run_cli("gen-randomness --n 32 --k 2 --seed b --out " + tmp("b.bsma")).exit_code == 0);
    REQUIRE(run_cli("keygen --n 32 --k 2 --seed b --out " + tmp("b.bsmk")).exit_code == 0);
    write_bytes(tmp("bmsg.bin"), {0xff, 0x0f});
    auto enc = run_cli("encrypt --alpha " + tmp("b.bsma") + " --key " + tmp("b.bsmk") +
                       " --in " + tmp("bmsg.bin") + " --out " + tmp("bct.bin") + " --bits 12");
    REQUIRE(enc.exit_code == 0);
    CHECK(read_bytes(tmp("bct.bin")).size() == 2);
    auto dec = run_cli("decrypt --alpha " + tmp("b.bsma") + " --key " + tmp("b.bsmk") +
                       " --in " + tmp("bct.bin") + " --out " + tmp("bpt.bin") + " --bits 12");
    REQUIRE(dec.exit_code == 0);
    // bits beyond the message length are zero in the round-tripped file
    CHECK(read_bytes(tmp("bpt.bin")) == std::vector<uint8_t>{0xff, 0x0f});

    auto too_many = run_cli("encrypt --alpha " + tmp("b.bsma") + " --key " + tmp("b.bsmk") +
                            " --in " + tmp("bmsg.bin") + " --out " + tmp("bct.bin") +
                            " --bits 99");
    CHECK(too_many.exit_code == 2);
}

TEST_CASE("oversized messages are a usage error") {
    REQUIRE(run_cli("gen-randomness --n 16 --k 2 --seed a --out " + tmp("small.bsma")).exit_code ==
            0);
    REQUIRE(run_cli("keygen --n 16 --k 2 --seed k --out " + tmp("small.bsmk")).exit_code == 0);
    write_bytes(tmp("big.bin"), std::vector<uint8_t>(3, 0xff));  // 24 bits > n = 16
    auto r = run_cli("encrypt --alpha " + tmp("small.bsma") + " --key " + tmp("small.bsmk") +
                     " --in " + tmp("big.bin") + " --out " + tmp("bigct.bin"));
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("length_mismatch") != std::string::npos);
}

TEST_CASE("all-zero randomness emits a degenerate warning but still encrypts") {
    // version 1 header for n=16,k=1 plus an all-zero payload
    std::vector<uint8_t> file = {'B', 'S', 'M', 'A', 1, 0, 16, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0,
                                 0, 0};
    write_bytes(tmp("zero.bsma"), file);
    REQUIRE(run_cli("keygen --n 16 --k 1 --seed k --out " + tmp("zero.bsmk")).exit_code == 0);
    write_bytes(tmp("zmsg.bin"), {0xaa});
    auto r = run_cli("encrypt --alpha " + tmp("zero.bsma") + " --key " + tmp("zero.bsmk") +
                     " --in " + tmp("zmsg.bin") + " --out " + tmp("zct.bin"));
    CHECK(r.exit_code == 0);
    CHECK(r.stderr_text.find("degenerate") != std::string::npos);
    CHECK(read_bytes(tmp("zct.bin")) == std::vector<uint8_t>{0xaa});
}

TEST_CASE("attack-sim: bit game with the random decoder hovers at 1/2") {
    auto r = run_cli("attack-sim --game bit --recorder zero --decoder random --n 4 --k 2 --m 1 "
                     "--trials 5000 --seed cli-fair");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.stdout_text);
    double est = j["estimate"].get<double>();
    double se = j["std_error"].get<double>();
    CHECK(std::abs(est - 0.5) <= 3.5 * se + 1e-12);
}

TEST_CASE("attack-sim: semantic game with equal messages reports zero") {
    auto r = run_cli("attack-sim --game semantic --recorder prefix --distinguisher random "
                     "--n 4 --k 2 --m 2 --m0 10 --m1 10 --trials 500 --seed cli-same");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["estimate"] == 0.0);
}

TEST_CASE("attack-sim: bayes decoder on a tiny instance attaches the exact value") {
    auto r = run_cli("attack-sim --game bit --recorder zero --decoder bayes --n 2 --k 2 --m 1 "
                     "--trials 4000 --seed cli-bayes");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.stdout_text);
    REQUIRE(j["exact"].is_string());
    CHECK(j["exact"] == "1/2");
    double est = j["estimate"].get<double>();
    double se = j["std_error"].get<double>();
    CHECK(std::abs(est - 0.5) <= 3.0 * se);
    // deterministic given the seed
    auto again = run_cli("attack-sim --game bit --recorder zero --decoder bayes --n 2 --k 2 "
                         "--m 1 --trials 4000 --seed cli-bayes");
    CHECK(nlohmann::json::parse(again.stdout_text)["successes"] == j["successes"]);
}

TEST_CASE("attack-sim rejects unknown selectors") {
    auto r = run_cli("attack-sim --game bit --recorder wiretap --decoder random --n 4 --k 2 "
                     "--m 1 --trials 10 --seed s");
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("unknown_selector") != std::string::npos);
}

TEST_CASE("verify suites pass and write reports") {
    for (const char* suite : {"discrepancy", "independence", "preimage"}) {
        auto r = run_cli(std::string("verify --suite ") + suite + " --json-out " +
                         tmp("verify.json"));
        CHECK(r.exit_code == 0);
        auto j = nlohmann::json::parse(r.stdout_text);
        CHECK(j["passed"] == true);
        auto file_bytes = read_bytes(tmp("verify.json"));
        std::string file_text(file_bytes.begin(), file_bytes.end());
        CHECK(nlohmann::json::parse(file_text)["passed"] == true);
    }
    auto bad = run_cli("verify --suite bogus");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("bounds reproduces the paper ceiling and the vacuous flag") {
    auto r = run_cli("bounds --n 35184372088832 --k 300 --m 33554432");
    REQUIRE(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.stdout_text);
    double bound = j["theorem1_bound_log2"].get<double>();
    CHECK(bound <= -23.0);
    CHECK(std::abs(bound + 24.0) <= 0.1);

    auto vac = run_cli("bounds --n 8 --k 6 --m 1");
    REQUIRE(vac.exit_code == 0);
    CHECK(nlohmann::json::parse(vac.stdout_text)["vacuous"] == true);

    auto dbl = run_cli("bounds --n 1024 --k 60 --m 32");
    auto dbl2 = run_cli("bounds --n 1024 --k 60 --m 64");
    double b1 = nlohmann::json::parse(dbl.stdout_text)["theorem1_bound_log2"].get<double>();
    double b2 = nlohmann::json::parse(dbl2.stdout_text)["theorem1_bound_log2"].get<double>();
    CHECK(b2 - b1 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("unknown subcommands and empty invocations are usage errors") {
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);
}
