#include "dprony/table_io.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

namespace dprony {

namespace {

constexpr std::size_t column_count = std::size(result_columns);
using Fields = std::array<std::string, column_count>;

enum class Kind
{
    integer,
    unsigned_integer,
    real,
    boolean,
    text,
};

constexpr std::array<Kind, column_count> column_kinds = {
    Kind::integer, Kind::text,    Kind::integer, Kind::integer, Kind::real,
    Kind::real,    Kind::real,    Kind::real,    Kind::integer, Kind::integer,
    Kind::integer, Kind::boolean, Kind::real,    Kind::real,    Kind::real,
    Kind::real,    Kind::boolean, Kind::text,    Kind::integer, Kind::unsigned_integer,
};

std::string format_real(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_bool(bool b)
{
    return b ? "true" : "false";
}

Fields to_fields(const ResultRow& r)
{
    return {std::to_string(r.trial_id),
            r.method,
            std::to_string(r.n),
            std::to_string(r.ell),
            format_real(r.delta),
            format_real(r.omega),
            format_real(r.eps),
            format_real(r.srf),
            std::to_string(r.n_lambda),
            std::to_string(r.n_bins),
            std::to_string(r.node_index),
            format_bool(r.in_cluster),
            format_real(r.abs_node_err),
            format_real(r.abs_amp_err),
            format_real(r.k_x),
            format_real(r.k_alpha),
            format_bool(r.success),
            r.status,
            std::to_string(r.runtime_ns),
            std::to_string(r.seed)};
}

template <typename T>
T parse_integer(const std::string& text, std::string_view column)
{
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::invalid_argument("bad integer '" + text + "' in column " + std::string(column));
    }
    return value;
}

double parse_real(const std::string& text, std::string_view column)
{
    if (text == "nan" || text == "null") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || errno == ERANGE) {
        throw std::invalid_argument("bad number '" + text + "' in column " + std::string(column));
    }
    return v;
}

bool parse_bool(const std::string& text, std::string_view column)
{
    if (text == "true" || text == "1") {
        return true;
    }
    if (text == "false" || text == "0") {
        return false;
    }
    throw std::invalid_argument("bad boolean '" + text + "' in column " + std::string(column));
}

ResultRow from_fields(const Fields& f)
{
    const auto& c = result_columns;
    ResultRow r;
    r.trial_id = parse_integer<std::int64_t>(f[0], c[0]);
    r.method = f[1];
    r.n = parse_integer<int>(f[2], c[2]);
    r.ell = parse_integer<int>(f[3], c[3]);
    r.delta = parse_real(f[4], c[4]);
    r.omega = parse_real(f[5], c[5]);
    r.eps = parse_real(f[6], c[6]);
    r.srf = parse_real(f[7], c[7]);
    r.n_lambda = parse_integer<int>(f[8], c[8]);
    r.n_bins = parse_integer<int>(f[9], c[9]);
    r.node_index = parse_integer<int>(f[10], c[10]);
    r.in_cluster = parse_bool(f[11], c[11]);
    r.abs_node_err = parse_real(f[12], c[12]);
    r.abs_amp_err = parse_real(f[13], c[13]);
    r.k_x = parse_real(f[14], c[14]);
    r.k_alpha = parse_real(f[15], c[15]);
    r.success = parse_bool(f[16], c[16]);
    r.status = f[17];
    r.runtime_ns = parse_integer<std::int64_t>(f[18], c[18]);
    r.seed = parse_integer<std::uint64_t>(f[19], c[19]);
    return r;
}

std::string json_value(const std::string& text, Kind kind)
{
    switch (kind) {
    case Kind::text:
        return nlohmann::json(text).dump();
    case Kind::real:
        return text == "nan" || text == "inf" || text == "-inf" ? "null" : text;
    default:
        return text;
    }
}

std::string field_from_json(const nlohmann::json& v, Kind kind)
{
    switch (kind) {
    case Kind::text:
        return v.get<std::string>();
    case Kind::boolean:
        return format_bool(v.get<bool>());
    case Kind::real:
        return v.is_null() ? "nan" : format_real(v.get<double>());
    case Kind::integer:
        return std::to_string(v.get<std::int64_t>());
    case Kind::unsigned_integer:
        return std::to_string(v.get<std::uint64_t>());
    }
    return {};
}

std::ofstream open_for_write(const std::filesystem::path& path)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

} // namespace

std::optional<TableFormat> parse_format(std::string_view text) noexcept
{
    if (text == "csv") {
        return TableFormat::csv;
    }
    if (text == "jsonl") {
        return TableFormat::jsonl;
    }
    return std::nullopt;
}

void write_csv(const ResultTable& table, std::ostream& out)
{
    for (std::size_t c = 0; c < column_count; ++c) {
        out << (c ? "," : "") << result_columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        const Fields f = to_fields(row);
        for (std::size_t c = 0; c < column_count; ++c) {
            out << (c ? "," : "") << f[c];
        }
        out << '\n';
    }
}

void write_jsonl(const ResultTable& table, std::ostream& out)
{
    for (const auto& row : table.rows) {
        const Fields f = to_fields(row);
        out << '{';
        for (std::size_t c = 0; c < column_count; ++c) {
            out << (c ? "," : "") << '"' << result_columns[c] << "\":" << json_value(f[c], column_kinds[c]);
        }
        out << "}\n";
    }
}

ResultTable read_csv(std::istream& in)
{
    ResultTable table;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("read_csv: missing header");
    }
    std::string expected;
    for (std::size_t c = 0; c < column_count; ++c) {
        expected += (c ? "," : "");
        expected += result_columns[c];
    }
    if (line != expected) {
        throw std::invalid_argument("read_csv: unexpected header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        Fields f;
        std::size_t c = 0;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            if (c >= column_count) {
                throw std::invalid_argument("read_csv: too many fields");
            }
            f[c++] = cell;
        }
        if (c != column_count) {
            throw std::invalid_argument("read_csv: expected " + std::to_string(column_count) +
                                        " fields, got " + std::to_string(c));
        }
        table.rows.push_back(from_fields(f));
    }
    return table;
}

ResultTable read_jsonl(std::istream& in)
{
    ResultTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto obj = nlohmann::json::parse(line);
        Fields f;
        for (std::size_t c = 0; c < column_count; ++c) {
            f[c] = field_from_json(obj.at(std::string(result_columns[c])), column_kinds[c]);
        }
        table.rows.push_back(from_fields(f));
    }
    return table;
}

void emit(const ResultTable& table, TableFormat format, const std::filesystem::path& path)
{
    {
        std::ofstream out = open_for_write(path);
        if (format == TableFormat::csv) {
            write_csv(table, out);
        } else {
            write_jsonl(table, out);
        }
        finish(out, path);
    }

    auto meta_path = path;
    meta_path += ".meta.json";
    nlohmann::json meta;
    meta["spec"] = table.metadata.spec_json.empty()
                       ? nlohmann::json(nullptr)
                       : nlohmann::json::parse(table.metadata.spec_json);
    meta["version"] = table.metadata.version;
    meta["timestamp"] = table.metadata.timestamp;
    std::ofstream out = open_for_write(meta_path);
    out << meta.dump(2) << '\n';
    finish(out, meta_path);
}

ResultTable load_table(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading: " + std::strerror(errno));
    }
    ResultTable table;
    try {
        table = path.extension() == ".jsonl" ? read_jsonl(in) : read_csv(in);
    } catch (const std::exception& e) {
        throw IoError("'" + path.string() + "': " + e.what());
    }

    auto meta_path = path;
    meta_path += ".meta.json";
    if (std::ifstream meta_in(meta_path); meta_in) {
        try {
            const auto meta = nlohmann::json::parse(meta_in);
            if (!meta.at("spec").is_null()) {
                table.metadata.spec_json = meta.at("spec").dump();
            }
            table.metadata.version = meta.at("version").get<std::string>();
            table.metadata.timestamp = meta.at("timestamp").get<std::string>();
        } catch (const std::exception& e) {
            throw IoError("'" + meta_path.string() + "': " + e.what());
        }
    }
    return table;
}

void write_collision_csv(std::span<const CollisionRow> rows, std::ostream& out)
{
    out << "lambda,delta_lambda,avoiding\n";
    for (const auto& r : rows) {
        out << format_real(r.lambda) << ',' << format_real(r.delta_lambda) << ','
            << format_bool(r.avoiding) << '\n';
    }
}

void emit_collision(std::span<const CollisionRow> rows, TableFormat format,
                    const std::filesystem::path& path)
{
    std::ofstream out = open_for_write(path);
    if (format == TableFormat::csv) {
        write_collision_csv(rows, out);
    } else {
        for (const auto& r : rows) {
            out << "{\"lambda\":" << format_real(r.lambda)
                << ",\"delta_lambda\":" << format_real(r.delta_lambda)
                << ",\"avoiding\":" << format_bool(r.avoiding) << "}\n";
        }
    }
    finish(out, path);
}

} // namespace dprony
