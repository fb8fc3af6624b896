#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace wold {

/// Minimal JSON emitter with a caller-fixed key order and floats rendered at
/// 17 significant digits, so identical runs produce byte-identical documents.
class JsonWriter {
public:
    std::string str() && { return std::move(out_); }

    void begin_object() { open('{'); }
    void begin_object(const std::string& key) { open_keyed(key, '{'); }
    void end_object() { close('}'); }
    void begin_array() { open('['); }
    void begin_array(const std::string& key) { open_keyed(key, '['); }
    void end_array() { close(']'); }

    void value(const std::string& s) { pre(); emit_string(s); }
    void value(const char* s) { value(std::string(s)); }
    void value(bool b) { pre(); out_ += b ? "true" : "false"; }
    void value(long long v) { pre(); out_ += std::to_string(v); }
    void value(int v) { value(static_cast<long long>(v)); }
    void value(unsigned v) { value(static_cast<long long>(v)); }
    void value(double d) {
        pre();
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", d);
        out_ += buf;
    }

    template <typename T>
    void kv(const std::string& key, const T& v) {
        this->key(key);
        pending_key_ = true;
        value(v);
    }

    void key(const std::string& k) {
        pre();
        emit_string(k);
        out_ += ':';
        pending_key_ = true;
    }

private:
    std::string out_;
    std::vector<bool> first_;
    bool pending_key_ = false;

    void pre() {
        if (pending_key_) {
            pending_key_ = false;
            return;
        }
        if (!first_.empty()) {
            if (!first_.back()) out_ += ',';
            first_.back() = false;
        }
    }

    void open(char c) {
        pre();
        out_ += c;
        first_.push_back(true);
    }

    void open_keyed(const std::string& k, char c) {
        key(k);
        pending_key_ = false;
        out_ += c;
        first_.push_back(true);
    }

    void close(char c) {
        out_ += c;
        first_.pop_back();
    }

    void emit_string(const std::string& s) {
        out_ += '"';
        for (char ch : s) {
            switch (ch) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\t': out_ += "\\t"; break;
                case '\r': out_ += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(ch) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                        out_ += buf;
                    } else {
                        out_ += ch;
                    }
            }
        }
        out_ += '"';
    }
};

} // namespace wold
