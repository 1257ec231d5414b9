#pragma once

#include "lightplan/config.hpp"

namespace lightplan::testing {

// Small model whose per-operator counts are verifiable by hand:
// d_head = 2, 384 parameters per expert, 3520 weight bytes per layer.
inline ModelSpec toy_model() {
    ModelSpec m;
    m.layers = 2;
    m.hidden_dim = 8;
    m.ffn_dim = 16;
    m.q_heads = 4;
    m.kv_heads = 2;
    m.experts = 4;
    m.top_k = 2;
    m.weight_dtype_bytes = 2;
    m.kv_dtype_bytes = 2;
    return m;
}

// Toy units: bandwidths and peaks chosen so every latency term is a short
// decimal. The link is the slow resource by two orders of magnitude.
inline HardwareSpec toy_hardware() {
    HardwareSpec hw;
    hw.gpu_mem_bytes = 1e6;
    hw.cpu_mem_bytes = 1e6;
    hw.gpu_bw = 50;
    hw.cpu_bw = 10;
    hw.link_bw = 2;
    hw.gpu_flops = 100;
    hw.cpu_flops = 10;
    return hw;
}

inline WorkloadSpec toy_workload() {
    WorkloadSpec w;
    w.prompt_len = 10;
    w.gen_len = 4;
    return w;
}

inline Policy toy_policy() {
    Policy p;
    p.batch = 8;
    p.micro_batch = 4;
    p.attn_on_gpu = false;
    p.ffn_on_gpu = true;
    p.weights_on_gpu = 0.0;
    p.kv_on_gpu = 0.0;
    return p;
}

// Mixtral-8x22B-shaped constants; the expert FFN alone is ~270 GB in fp16.
inline ModelSpec mixtral_8x22b_model() {
    ModelSpec m;
    m.layers = 56;
    m.hidden_dim = 6144;
    m.ffn_dim = 16384;
    m.q_heads = 48;
    m.kv_heads = 8;
    m.experts = 8;
    m.top_k = 2;
    m.weight_dtype_bytes = 2;
    m.kv_dtype_bytes = 2;
    return m;
}

}  // namespace lightplan::testing
