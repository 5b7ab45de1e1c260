#include "posboot/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace posboot::io {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw input_error("cannot open " + path.string());
    }
    return in;
}

std::string join(const std::vector<std::string>& parts, char delimiter) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out += delimiter;
        }
        out += parts[i];
    }
    return out;
}

}  // namespace

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view text, char delimiter) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(delimiter, start);
        if (pos == std::string_view::npos) {
            out.push_back(trim(text.substr(start)));
            return out;
        }
        out.push_back(trim(text.substr(start, pos - start)));
        start = pos + 1;
    }
}

double parse_double(std::string_view field) {
    field = trim(field);
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw input_error("not a finite number: '" + std::string(field) + "'");
    }
    return value;
}

std::uint64_t parse_uint(std::string_view field) {
    field = trim(field);
    std::uint64_t value = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc() || ptr != end) {
        throw input_error("not a non-negative integer: '" + std::string(field) + "'");
    }
    return value;
}

std::vector<double> parse_double_list(std::string_view text, char delimiter) {
    std::vector<double> out;
    for (auto part : split(text, delimiter)) {
        out.push_back(parse_double(part));
    }
    return out;
}

std::vector<DsvRow> read_dsv(std::istream& in, const std::string& source,
                             const std::vector<std::string>& header, char delimiter) {
    std::vector<DsvRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        const auto fields = split(body, delimiter);
        if (!saw_header) {
            std::vector<std::string> got(fields.begin(), fields.end());
            if (got != header) {
                throw parse_error(source, line_no,
                                  "expected header '" + join(header, delimiter) + "', got '" +
                                      std::string(body) + "'");
            }
            saw_header = true;
            continue;
        }
        if (fields.size() != header.size()) {
            throw parse_error(source, line_no,
                              "expected " + std::to_string(header.size()) + " fields, got " +
                                  std::to_string(fields.size()));
        }
        rows.push_back({line_no, std::vector<std::string>(fields.begin(), fields.end())});
    }
    if (!saw_header) {
        throw parse_error(source, line_no, "missing header '" + join(header, delimiter) + "'");
    }
    return rows;
}

LedgerRows read_ledger_rows(std::istream& in, const std::string& source) {
    LedgerRows out;
    for (const auto& row : read_dsv(in, source, {"round", "from", "to", "amount"})) {
        try {
            out.records.push_back({parse_uint(row.fields[0]), row.fields[1], row.fields[2],
                                   parse_double(row.fields[3])});
            out.lines.push_back(row.line);
        } catch (const input_error& e) {
            throw parse_error(source, row.line, e.what());
        }
    }
    return out;
}

LedgerRows read_ledger_rows(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_ledger_rows(in, path.string());
}

std::vector<ledger::TransferRecord> read_ledger(std::istream& in, const std::string& source) {
    return read_ledger_rows(in, source).records;
}

std::vector<ledger::TransferRecord> read_ledger(const std::filesystem::path& path) {
    return read_ledger_rows(path).records;
}

std::string format_ledger(const std::vector<ledger::TransferRecord>& records) {
    std::ostringstream out;
    out << "round,from,to,amount\n";
    for (const auto& r : records) {
        out << r.round << ',' << r.from << ',' << r.to << ',' << format_number(r.amount) << '\n';
    }
    return out.str();
}

ValuationRows read_valuations(std::istream& in, const std::string& source) {
    ValuationRows out;
    for (const auto& row : read_dsv(in, source, {"player", "theta_hat", "theta"})) {
        try {
            if (row.fields[0].empty()) {
                throw input_error("empty player id");
            }
            out.players.push_back(row.fields[0]);
            out.theta_hat.push_back(parse_double(row.fields[1]));
            out.theta.push_back(parse_double(row.fields[2]));
            out.lines.push_back(row.line);
        } catch (const input_error& e) {
            throw parse_error(source, row.line, e.what());
        }
    }
    return out;
}

ValuationRows read_valuations(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_valuations(in, path.string());
}

std::string format_valuations(const ValuationRows& rows) {
    std::ostringstream out;
    out << "player,theta_hat,theta\n";
    for (std::size_t i = 0; i < rows.players.size(); ++i) {
        out << rows.players[i] << ',' << format_number(rows.theta_hat[i]) << ','
            << format_number(rows.theta[i]) << '\n';
    }
    return out.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw input_error("cannot write " + tmp.string());
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw input_error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw input_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

std::string format_number(double x) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc()) {
        return std::to_string(x);
    }
    return std::string(buf.data(), ptr);
}

}  // namespace posboot::io
