#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "posboot/error.hpp"
#include "posboot/ledger.hpp"

namespace posboot::io {

/// Parse failure with the 1-based line number of the offending row.
class parse_error : public input_error {
public:
    parse_error(std::string source, std::size_t line, const std::string& what)
        : input_error(source + ":" + std::to_string(line) + ": " + what),
          source_(std::move(source)),
          line_(line) {}

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

std::vector<std::string_view> split(std::string_view text, char delimiter);
std::string_view trim(std::string_view text);

/// Strict numeric parsing of the whole field. Throws input_error.
double parse_double(std::string_view field);
std::uint64_t parse_uint(std::string_view field);
std::vector<double> parse_double_list(std::string_view text, char delimiter = ',');

struct DsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

/// Reads a delimiter-separated file whose header must equal `header` exactly.
/// Blank lines and lines starting with '#' are skipped.
std::vector<DsvRow> read_dsv(std::istream& in, const std::string& source,
                             const std::vector<std::string>& header, char delimiter = ',');

/// Ledger file: `round,from,to,amount`.
std::vector<ledger::TransferRecord> read_ledger(const std::filesystem::path& path);
std::vector<ledger::TransferRecord> read_ledger(std::istream& in, const std::string& source);
std::string format_ledger(const std::vector<ledger::TransferRecord>& records);

/// Records plus the 1-based source line of each, for error reporting.
struct LedgerRows {
    std::vector<ledger::TransferRecord> records;
    std::vector<std::size_t> lines;
};
LedgerRows read_ledger_rows(std::istream& in, const std::string& source);
LedgerRows read_ledger_rows(const std::filesystem::path& path);

struct ValuationRows {
    std::vector<std::string> players;
    std::vector<double> theta_hat;
    std::vector<double> theta;
    std::vector<std::size_t> lines;
};

/// Valuations file: `player,theta_hat,theta`.
ValuationRows read_valuations(const std::filesystem::path& path);
ValuationRows read_valuations(std::istream& in, const std::string& source);
std::string format_valuations(const ValuationRows& rows);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Shortest round-trippable decimal text for a double.
std::string format_number(double x);

}  // namespace posboot::io
