#ifndef DPRONY_TABLE_IO_HPP
#define DPRONY_TABLE_IO_HPP

#include "dprony/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

namespace dprony {

enum class TableFormat
{
    csv,
    jsonl,
};

std::optional<TableFormat> parse_format(std::string_view text) noexcept;

/// I/O failure; the message names the offending path.
class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Column order shared by the CSV header and the JSONL keys.
inline constexpr std::string_view result_columns[] = {
    "trial_id", "method",       "n",           "ell",      "delta",   "omega",   "eps",
    "srf",      "n_lambda",     "n_bins",      "node_index", "in_cluster", "abs_node_err",
    "abs_amp_err", "k_x",       "k_alpha",     "success",  "status",  "runtime_ns", "seed",
};

/// Floats use 17 significant digits; NaN is written as "nan" (CSV) or null (JSONL).
void write_csv(const ResultTable& table, std::ostream& out);
void write_jsonl(const ResultTable& table, std::ostream& out);

ResultTable read_csv(std::istream& in);
ResultTable read_jsonl(std::istream& in);

///
/// Writes the rows to `path` and the metadata (spec echo, version, timestamp)
/// to the sidecar `<path>.meta.json`. Throws IoError.
///
void emit(const ResultTable& table, TableFormat format, const std::filesystem::path& path);

/// Reads rows (and the sidecar metadata if present). Throws IoError.
ResultTable load_table(const std::filesystem::path& path);

void write_collision_csv(std::span<const CollisionRow> rows, std::ostream& out);

void emit_collision(std::span<const CollisionRow> rows, TableFormat format,
                    const std::filesystem::path& path);

} // namespace dprony

#endif // DPRONY_TABLE_IO_HPP
