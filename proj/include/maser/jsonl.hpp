#pragma once

#include "maser/error.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <functional>
#include <string>
#include <vector>

namespace maser {

// One JSON record per line, UTF-8. Parse failures surface as SchemaError
// with the 1-based line number.
template <typename T>
std::vector<T> read_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path);
    }
    std::vector<T> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(nlohmann::json::parse(line).get<T>());
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw Error(ErrorCode::SchemaError,
                        path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

template <typename T>
size_t write_jsonl(const std::vector<T>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    for (const T& record : records) {
        out << nlohmann::json(record).dump() << "\n";
    }
    if (!out) {
        throw Error(ErrorCode::IoError, "write failed for " + path);
    }
    return records.size();
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path);
    }
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write " + path);
    }
    out << content;
    if (!out) {
        throw Error(ErrorCode::IoError, "write failed for " + path);
    }
}

}  // namespace maser
