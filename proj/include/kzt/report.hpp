#pragma once

// Minimal ordered JSON value for report emission. Keys keep insertion order
// and all floats are serialised with 17 significant digits, so identical runs
// produce byte-identical reports; parsing of configs is done elsewhere.

#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include "kzt/arith.hpp"

namespace kzt::report {

class Json {
  public:
    Json() : val_(nullptr) {}
    Json(bool b) : val_(b) {}
    Json(double d) : val_(d) {}
    Json(arith::i64 i) : val_(i) {}
    Json(int i) : val_(arith::i64(i)) {}
    Json(const char* s) : val_(std::string(s)) {}
    Json(std::string s) : val_(std::move(s)) {}

    static Json object() {
        Json j;
        j.val_ = Members{};
        return j;
    }
    static Json array() {
        Json j;
        j.val_ = Items{};
        return j;
    }

    Json& set(const std::string& key, Json v) {
        std::get<Members>(val_).emplace_back(key, std::move(v));
        return *this;
    }
    Json& push(Json v) {
        std::get<Items>(val_).push_back(std::move(v));
        return *this;
    }

    std::string dump(int indent = 0) const {
        std::string out;
        write(out, indent, 0);
        if (indent > 0) out += '\n';
        return out;
    }

  private:
    struct Members : std::vector<std::pair<std::string, Json>> {};
    struct Items : std::vector<Json> {};
    std::variant<std::nullptr_t, bool, double, arith::i64, std::string, Members, Items> val_;

    static void escape(std::string& out, const std::string& s) {
        out += '"';
        for (char ch : s) {
            switch (ch) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                default: out += ch;
            }
        }
        out += '"';
    }

    void write(std::string& out, int indent, int depth) const {
        auto pad = [&](int d) {
            if (indent > 0) {
                out += '\n';
                out.append(size_t(indent) * size_t(d), ' ');
            }
        };
        if (std::holds_alternative<std::nullptr_t>(val_)) {
            out += "null";
        } else if (auto* b = std::get_if<bool>(&val_)) {
            out += *b ? "true" : "false";
        } else if (auto* d = std::get_if<double>(&val_)) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", *d);
            out += buf;
        } else if (auto* i = std::get_if<arith::i64>(&val_)) {
            out += std::to_string(*i);
        } else if (auto* s = std::get_if<std::string>(&val_)) {
            escape(out, *s);
        } else if (auto* m = std::get_if<Members>(&val_)) {
            out += '{';
            bool first = true;
            for (const auto& [k, v] : *m) {
                if (!first) out += ',';
                first = false;
                pad(depth + 1);
                escape(out, k);
                out += indent > 0 ? ": " : ":";
                v.write(out, indent, depth + 1);
            }
            if (!m->empty()) pad(depth);
            out += '}';
        } else if (auto* a = std::get_if<Items>(&val_)) {
            out += '[';
            bool first = true;
            for (const auto& v : *a) {
                if (!first) out += ',';
                first = false;
                pad(depth + 1);
                v.write(out, indent, depth + 1);
            }
            if (!a->empty()) pad(depth);
            out += ']';
        }
    }
};

}  // namespace kzt::report
