#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lightplan {

// All analysis artifacts print floating values with 9 significant digits so
// golden files stay stable across platforms.
std::string fmt_g9(double value);

std::string json_escape(const std::string& text);

// Minimal ordered JSON writer. Keys are emitted in insertion order and
// numbers through fmt_g9, which nlohmann-style writers do not guarantee.
class JsonWriter {
  public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& name);
    JsonWriter& value(double v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v) { return value(std::string(v)); }
    JsonWriter& null_value();

    std::string str() const { return out_; }

  private:
    void prefix();

    std::string out_;
    std::vector<bool> first_in_scope_;
    bool pending_key_ = false;
};

}  // namespace lightplan
