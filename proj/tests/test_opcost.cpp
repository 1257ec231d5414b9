#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "lightplan/opcost.hpp"

using namespace lightplan;

namespace {

ModelSpec random_model(std::mt19937& rng) {
    std::uniform_int_distribution<int> heads(1, 8);
    std::uniform_int_distribution<int> dims(1, 64);
    ModelSpec m;
    m.layers = 1 + heads(rng);
    m.kv_heads = heads(rng);
    m.q_heads = m.kv_heads * heads(rng);
    m.hidden_dim = m.q_heads * dims(rng);
    m.ffn_dim = dims(rng) * 2;
    m.experts = heads(rng);
    m.top_k = 1 + (heads(rng) - 1) % m.experts;
    m.weight_dtype_bytes = 2;
    m.kv_dtype_bytes = 2;
    return m;
}

}  // namespace

TEST_CASE("attention decode profile matches the hand count") {
    const ModelSpec m = testing::toy_model();
    const OpProfile p1 = attention_decode_profile(m, 1, 10);
    CHECK(p1.flops == 320.0);
    CHECK(p1.cpu_bytes == 160.0);
    CHECK(p1.cpu_intensity() == 2.0);

    const OpProfile p2 = attention_decode_profile(m, 2, 10);
    CHECK(p2.flops == 640.0);
    CHECK(p2.cpu_bytes == 320.0);
    CHECK(p2.cpu_intensity() == p1.cpu_intensity());
}

TEST_CASE("attention intensity is exactly invariant in the token count") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> mu_dist(1, 512);
    std::uniform_int_distribution<int> ctx_dist(1, 4096);
    for (int trial = 0; trial < 200; ++trial) {
        const ModelSpec m = random_model(rng);
        const double ctx = ctx_dist(rng);
        const double mu = mu_dist(rng);
        const OpProfile a = attention_decode_profile(m, mu, ctx);
        const OpProfile b = attention_decode_profile(m, 2 * mu, ctx);
        CHECK(a.cpu_intensity() == b.cpu_intensity());  // exact, not approximate
    }
}

TEST_CASE("moe ffn profile matches the hand count") {
    const ModelSpec m = testing::toy_model();
    const OpProfile p = moe_ffn_profile(m, 1, 0.0);
    CHECK(p.flops == 1536.0);
    CHECK(p.link_bytes == 3072.0);
    CHECK(p.link_intensity() == 0.5);

    CHECK(moe_ffn_profile(m, 4, 0.0).link_intensity() == 2.0);
    CHECK(moe_ffn_profile(m, 1, 1.0).link_bytes == 0.0);
}

TEST_CASE("ffn link intensity is non-decreasing in the micro-batch size") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const ModelSpec m = random_model(rng);
        double previous = 0.0;
        for (double mu : {1.0, 2.0, 4.0, 8.0, 64.0, 512.0}) {
            const double intensity = moe_ffn_profile(m, mu, 0.0).link_intensity();
            CHECK(intensity >= previous);
            previous = intensity;
        }
    }
}

TEST_CASE("profiles scale linearly in the token count") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const ModelSpec m = random_model(rng);
        for (int c : {2, 3, 7}) {
            const OpProfile base = attention_decode_profile(m, 5, 31);
            const OpProfile scaled = attention_decode_profile(m, 5.0 * c, 31);
            CHECK(scaled.flops == c * base.flops);
            const OpProfile fb = moe_ffn_profile(m, 5, 0.25);
            const OpProfile fs = moe_ffn_profile(m, 5.0 * c, 0.25);
            CHECK(fs.flops == c * fb.flops);
        }
    }
}

TEST_CASE("projection profiles match the hand count") {
    const ModelSpec m = testing::toy_model();
    const ProjectionProfiles p = projection_profiles(m, 1);
    CHECK(p.qkv.flops == 256.0);
    CHECK(p.output.flops == 128.0);
    CHECK(p.qkv.gpu_bytes == 256.0);
    CHECK(p.output.gpu_bytes == 128.0);
}

TEST_CASE("transfer sizes match the hand counts") {
    const ModelSpec m = testing::toy_model();
    CHECK(layer_weight_bytes(m).total() == 3520.0);

    Policy policy = testing::toy_policy();
    const TransferSizes cpu_attn = transfer_sizes(m, policy, 10);
    CHECK(cpu_attn.weight_stream == 3520.0);
    CHECK(cpu_attn.hidden_upload == 64.0);  // mu=4 tokens of h1 at dt_w
    CHECK(cpu_attn.kv_upload == 0.0);       // CPU attention needs no KV upload

    policy.attn_on_gpu = true;
    policy.kv_on_gpu = 0.5;
    const TransferSizes gpu_attn = transfer_sizes(m, policy, 10);
    CHECK(gpu_attn.kv_upload == 0.5 * 4 * 2 * 10 * 2 * 2 * 2);
}

TEST_CASE("memory totals match the hand counts") {
    const ModelSpec m = testing::toy_model();
    const WorkloadSpec w = testing::toy_workload();
    const MemoryTotals totals = memory_totals(m, w, 8);
    CHECK(totals.weight_bytes == 7040.0);    // 2 layers of 3520
    CHECK(totals.kv_cache_bytes == 3584.0);  // 8*(10+4)*2*2*2*2*2
    CHECK(memory_totals(m, w, 0).kv_cache_bytes == 0.0);
}

TEST_CASE("expert FFN weights of the Mixtral-8x22B shape exceed 256 GB") {
    const ModelSpec m = testing::mixtral_8x22b_model();
    const double expert_bytes =
        static_cast<double>(m.layers) * layer_weight_bytes(m).experts;
    CHECK(expert_bytes == 270582939648.0);  // exact product
    CHECK(expert_bytes > 256e9);
    CHECK(memory_totals(m, {512, 64}, 1).weight_bytes > expert_bytes);
}
