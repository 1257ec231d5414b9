#pragma once

#include "lightplan/config.hpp"

namespace lightplan {

// Theoretical FLOPs and byte traffic for one operator instance processing
// `tokens` tokens in the decode stage. Byte counts are kept per memory
// level: gpu_bytes/cpu_bytes are the traffic the kernel generates at that
// level's memory when it runs there; link_bytes is what must cross the
// CPU->GPU link under the policy the profile was built for.
//
// Matmul MACs only: softmax, layer norm and other element-wise work are
// lower-order and excluded, which keeps the attention intensity exactly
// invariant in the token count.
struct OpProfile {
    double flops = 0;
    double gpu_bytes = 0;
    double cpu_bytes = 0;
    double link_bytes = 0;

    double gpu_intensity() const { return gpu_bytes > 0 ? flops / gpu_bytes : 0.0; }
    double cpu_intensity() const { return cpu_bytes > 0 ? flops / cpu_bytes : 0.0; }
    double link_intensity() const { return link_bytes > 0 ? flops / link_bytes : 0.0; }
};

// Grouped-query attention over a KV cache of `ctx` tokens: QK^T and PV
// matmuls plus the K/V reads. Query/output traffic is lower-order and not
// counted. gpu_bytes and cpu_bytes carry the same KV read volume; which one
// applies depends on where the cache lives.
OpProfile attention_decode_profile(const ModelSpec& model, double tokens, double ctx);

// Top-k expert FFN, three projections per expert. All experts' weights are
// counted once per instance: routing is unknown before dispatch, so whole
// layers stream regardless of k. link_bytes is the non-resident share.
OpProfile moe_ffn_profile(const ModelSpec& model, double tokens, double weights_on_gpu);

// QKV projection (pre-attention) and O projection (post-attention).
// Byte counts are the weight reads; activation traffic is lower-order here.
struct ProjectionProfiles {
    OpProfile qkv;
    OpProfile output;
};
ProjectionProfiles projection_profiles(const ModelSpec& model, double tokens);

// Per-layer weight bytes by component. The router gate weights are counted
// (they stream with the layer) but their FLOPs are ignored as lower-order.
struct LayerWeightBytes {
    double experts = 0;
    double qkv = 0;
    double output = 0;
    double router = 0;

    double total() const { return experts + qkv + output + router; }
};
LayerWeightBytes layer_weight_bytes(const ModelSpec& model);

// The four transfer classes, in bytes. qkv_offload and hidden_upload are
// per micro-batch; weight_stream is per layer; kv_upload is per micro-batch
// and zero unless attention runs on the GPU.
struct TransferSizes {
    double qkv_offload = 0;    // D1, device-to-host
    double hidden_upload = 0;  // D2, host-to-device
    double weight_stream = 0;  // D3, host-to-device
    double kv_upload = 0;      // D4, host-to-device
};
TransferSizes transfer_sizes(const ModelSpec& model, const Policy& policy, double ctx);

// Whole-model totals: all layer weights, and the KV cache for `batch`
// requests held to full length (prompt + generation).
struct MemoryTotals {
    double weight_bytes = 0;
    double kv_cache_bytes = 0;
};
MemoryTotals memory_totals(const ModelSpec& model, const WorkloadSpec& workload,
                           std::int64_t batch);

}  // namespace lightplan
