#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "bsm/randomness.hpp"

using namespace bsm;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/bsm_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

StreamConfig test_config(const std::string& seed_text) {
    StreamConfig cfg;
    cfg.seed = seed_from_string(seed_text);
    return cfg;
}

} // namespace

TEST_CASE("generation is deterministic per (seed, n, k, kind)") {
    StreamConfig cfg = test_config("seed-a");
    RandomString a1 = generate(cfg, 32, 3);
    RandomString a2 = generate(cfg, 32, 3);
    CHECK(a1 == a2);

    RandomString b = generate(test_config("seed-b"), 32, 3);
    CHECK(a1 == a1);
    CHECK_FALSE(a1 == b);

    cfg.generator_kind = GeneratorKind::cryptographic;
    RandomString c1 = generate(cfg, 32, 3);
    RandomString c2 = generate(cfg, 32, 3);
    CHECK(c1 == c2);
    CHECK_FALSE(c1 == a1);
}

TEST_CASE("fixed test seed reproduces the pinned ones count") {
    RandomString a = generate(test_config("golden-test-seed"), 8, 2);
    CHECK(a.bits().count_ones() == 7);
    CHECK(a.bits().to_bytes() == std::vector<uint8_t>{0x2d, 0x45});
}

TEST_CASE("chacha20 keystream matches the RFC 8439 zero-key vector") {
    Seed32 key{};  // all zero
    uint8_t out[32];
    chacha20_keystream(key, out, sizeof(out));
    const uint8_t expected[32] = {0x76, 0xb8, 0xe0, 0xad, 0xa0, 0xf1, 0x3d, 0x90,
                                  0x40, 0x5d, 0x6a, 0xe5, 0x53, 0x86, 0xbd, 0x28,
                                  0xbd, 0xd2, 0x19, 0xb8, 0xa0, 0x8d, 0xed, 0x1a,
                                  0xa8, 0x36, 0xef, 0xcc, 0x8b, 0x77, 0x0d, 0xc7};
    for (int i = 0; i < 32; ++i) CHECK(out[i] == expected[i]);
}

TEST_CASE("broadcast blocks reassemble to the packed string for any block size") {
    StreamConfig cfg = test_config("blocks");
    RandomString alpha = generate(cfg, 8, 3);

    cfg.block_size = alpha.bits().size();
    auto one = broadcast_blocks(alpha, cfg);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == alpha.bits());

    cfg.block_size = 1;
    auto singles = broadcast_blocks(alpha, cfg);
    CHECK(singles.size() == alpha.bits().size());

    for (uint64_t bs = 1; bs <= alpha.bits().size() + 2; ++bs) {
        cfg.block_size = bs;
        BitVec joined;
        for (const auto& b : broadcast_blocks(alpha, cfg))
            for (uint64_t i = 0; i < b.size(); ++i) joined.push_back(b.get(i));
        CHECK(joined == alpha.bits());
    }
}

TEST_CASE("persistence round trip is bit exact across the size grid") {
    uint64_t salt = 0;
    TempFile f("roundtrip.bsma");
    for (uint64_t n = 1; n <= 64; ++n) {
        for (uint32_t k = 1; k <= 8; ++k) {
            StreamConfig cfg = test_config("grid-" + std::to_string(salt++));
            RandomString alpha = generate(cfg, n, k);
            save(alpha, f.path);
            CHECK(load(f.path) == alpha);
        }
    }
}

TEST_CASE("load rejects malformed files") {
    RandomString alpha = generate(test_config("fmt"), 16, 2);
    TempFile f("format.bsma");
    save(alpha, f.path);

    auto mutate = [&](auto fn) {
        std::ifstream in(f.path, std::ios::binary);
        std::vector<char> data((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
        in.close();
        fn(data);
        std::ofstream out(f.path, std::ios::binary | std::ios::trunc);
        out.write(data.data(), std::streamsize(data.size()));
    };

    SUBCASE("truncated payload") {
        mutate([](std::vector<char>& d) { d.pop_back(); });
        CHECK_THROWS_AS(load(f.path), Error);
    }
    SUBCASE("wrong magic") {
        mutate([](std::vector<char>& d) { d[0] = 'X'; });
        try {
            load(f.path);
            FAIL("expected format error");
        } catch (const Error& e) {
            CHECK(e.code() == errc::format_error);
        }
    }
    SUBCASE("unsupported version") {
        mutate([](std::vector<char>& d) { d[4] = 9; });
        CHECK_THROWS_AS(load(f.path), Error);
    }
    SUBCASE("trailing garbage") {
        mutate([](std::vector<char>& d) { d.push_back(0); });
        CHECK_THROWS_AS(load(f.path), Error);
    }
    SUBCASE("missing file") {
        try {
            load("/tmp/bsm_test_does_not_exist.bsma");
            FAIL("expected io error");
        } catch (const Error& e) {
            CHECK(e.code() == errc::io_error);
        }
    }
}

TEST_CASE("row_stats produces exact fractions") {
    RandomString zeros(4, 2, BitVec(8));
    RowStats s0 = row_stats(zeros);
    CHECK(s0.global_ones_fraction == 0);
    for (const auto& r : s0.per_row_ones_fraction) CHECK(r == 0);

    BitVec all_ones(8);
    for (uint64_t i = 0; i < 8; ++i) all_ones.set(i, true);
    RowStats s1 = row_stats(RandomString(4, 2, all_ones));
    CHECK(s1.global_ones_fraction == 1);
    CHECK(s1.ones_count == 8);

    // alpha^(1) = [1,1], alpha^(2) = [1,0]
    RandomString mixed(2, 2, BitVec::from_bits({1, 1, 1, 0}));
    RowStats sm = row_stats(mixed);
    CHECK(sm.per_row_ones_fraction[0] == 1);
    CHECK(sm.per_row_ones_fraction[1] == Rational(1, 2));
    CHECK(sm.global_ones_fraction == Rational(3, 4));
    CHECK(sm.ones_count == 3);
}

TEST_CASE("global fraction is the n-weighted mean of the row fractions") {
    auto rng_cfg = test_config("weighted");
    for (uint32_t k = 1; k <= 6; ++k) {
        RandomString alpha = generate(rng_cfg, 24, k);
        RowStats stats = row_stats(alpha);
        Rational mean = 0;
        for (const auto& r : stats.per_row_ones_fraction) mean += r;
        mean /= k;
        CHECK(mean == stats.global_ones_fraction);
    }
}
