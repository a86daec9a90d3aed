#include "rbsde/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace rbsde {

std::string format_double(double v) {
    char buf[64];
    const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf, res.ptr);
}

CsvBuilder::CsvBuilder(const std::vector<std::string>& header)
    : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) text_ += ',';
        text_ += header[i];
    }
    text_ += '\n';
}

void CsvBuilder::separator() {
    if (in_row_ > 0) text_ += ',';
    ++in_row_;
}

CsvBuilder& CsvBuilder::cell(double v) {
    separator();
    text_ += format_double(v);
    return *this;
}

CsvBuilder& CsvBuilder::cell(std::int64_t v) {
    separator();
    text_ += std::to_string(v);
    return *this;
}

CsvBuilder& CsvBuilder::cell(const std::string& v) {
    separator();
    text_ += v;
    return *this;
}

void CsvBuilder::end_row() {
    if (in_row_ != columns_) {
        throw std::logic_error("CsvBuilder: row width does not match header");
    }
    text_ += '\n';
    in_row_ = 0;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open '" + tmp + "' for writing");
        }
        out.write(contents.data(),
                  static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw std::runtime_error("failed writing '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("failed to move '" + tmp + "' to '" + path + "'");
    }
}

}  // namespace rbsde
