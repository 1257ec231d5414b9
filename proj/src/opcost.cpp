#include "lightplan/opcost.hpp"

namespace lightplan {

OpProfile attention_decode_profile(const ModelSpec& model, double tokens, double ctx) {
    const double d_head = static_cast<double>(model.head_dim());
    OpProfile profile;
    profile.flops = tokens * 4.0 * static_cast<double>(model.q_heads) * d_head * ctx;
    const double kv_read =
        tokens * 2.0 * ctx * static_cast<double>(model.kv_heads) * d_head * model.kv_dtype_bytes;
    profile.gpu_bytes = kv_read;
    profile.cpu_bytes = kv_read;
    profile.link_bytes = 0.0;
    return profile;
}

OpProfile moe_ffn_profile(const ModelSpec& model, double tokens, double weights_on_gpu) {
    const double h1 = static_cast<double>(model.hidden_dim);
    const double h2 = static_cast<double>(model.ffn_dim);
    const double expert_weight_bytes =
        static_cast<double>(model.experts) * 3.0 * h1 * h2 * model.weight_dtype_bytes;

    OpProfile profile;
    profile.flops = tokens * static_cast<double>(model.top_k) * 2.0 * (3.0 * h1 * h2);
    const double activation_bytes = tokens * (h1 + h2) * model.weight_dtype_bytes;
    profile.gpu_bytes = expert_weight_bytes + activation_bytes;
    profile.cpu_bytes = expert_weight_bytes + activation_bytes;
    profile.link_bytes = (1.0 - weights_on_gpu) * expert_weight_bytes;
    return profile;
}

ProjectionProfiles projection_profiles(const ModelSpec& model, double tokens) {
    const double h1 = static_cast<double>(model.hidden_dim);
    const double d_head = static_cast<double>(model.head_dim());
    const double qkv_cols =
        static_cast<double>(model.q_heads + 2 * model.kv_heads) * d_head;

    ProjectionProfiles profiles;
    profiles.qkv.flops = tokens * 2.0 * h1 * qkv_cols;
    profiles.qkv.gpu_bytes = h1 * qkv_cols * model.weight_dtype_bytes;
    profiles.qkv.cpu_bytes = profiles.qkv.gpu_bytes;

    profiles.output.flops = tokens * 2.0 * h1 * h1;
    profiles.output.gpu_bytes = h1 * h1 * model.weight_dtype_bytes;
    profiles.output.cpu_bytes = profiles.output.gpu_bytes;
    return profiles;
}

LayerWeightBytes layer_weight_bytes(const ModelSpec& model) {
    const double h1 = static_cast<double>(model.hidden_dim);
    const double h2 = static_cast<double>(model.ffn_dim);
    const double d_head = static_cast<double>(model.head_dim());
    const double dt = model.weight_dtype_bytes;

    LayerWeightBytes bytes;
    bytes.experts = static_cast<double>(model.experts) * 3.0 * h1 * h2 * dt;
    bytes.qkv = h1 * static_cast<double>(model.q_heads + 2 * model.kv_heads) * d_head * dt;
    bytes.output = h1 * h1 * dt;
    bytes.router = h1 * static_cast<double>(model.experts) * dt;
    return bytes;
}

TransferSizes transfer_sizes(const ModelSpec& model, const Policy& policy, double ctx) {
    const double mu = static_cast<double>(policy.micro_batch);
    const double d_head = static_cast<double>(model.head_dim());

    TransferSizes sizes;
    sizes.qkv_offload = mu * static_cast<double>(model.q_heads + 2 * model.kv_heads) * d_head *
                        model.weight_dtype_bytes;
    sizes.hidden_upload = mu * static_cast<double>(model.hidden_dim) * model.weight_dtype_bytes;
    sizes.weight_stream = (1.0 - policy.weights_on_gpu) * layer_weight_bytes(model).total();
    sizes.kv_upload = policy.attn_on_gpu
                          ? (1.0 - policy.kv_on_gpu) * mu * 2.0 * ctx *
                                static_cast<double>(model.kv_heads) * d_head * model.kv_dtype_bytes
                          : 0.0;
    return sizes;
}

MemoryTotals memory_totals(const ModelSpec& model, const WorkloadSpec& workload,
                           std::int64_t batch) {
    MemoryTotals totals;
    totals.weight_bytes = static_cast<double>(model.layers) * layer_weight_bytes(model).total();
    totals.kv_cache_bytes = static_cast<double>(batch) *
                            static_cast<double>(workload.prompt_len + workload.gen_len) * 2.0 *
                            static_cast<double>(model.kv_heads) *
                            static_cast<double>(model.head_dim()) *
                            static_cast<double>(model.layers) * model.kv_dtype_bytes;
    return totals;
}

}  // namespace lightplan
