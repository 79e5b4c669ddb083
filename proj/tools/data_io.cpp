// data_io.cpp — Table serialisation

#include "data_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace blockade::cli {

namespace {

constexpr int kSchemaVersion = 1;
constexpr const char* kUnitsNote =
    "rates and frequencies in units of gamma_rd; times in 1/gamma_rd";

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

void check_table(const DataTable& table)
{
    if (table.columns.size() != table.values.size()) {
        throw std::invalid_argument("DataTable: column name/value count mismatch");
    }
    for (const auto& col : table.values) {
        if (col.size() != table.rows()) {
            throw std::invalid_argument("DataTable: ragged columns");
        }
    }
}

} // namespace

const std::vector<double>& DataTable::column(const std::string& name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return values[i];
    }
    throw std::out_of_range("DataTable: no column named " + name);
}

void write_csv(const std::filesystem::path& path, const DataTable& table)
{
    check_table(table);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");

    out << "# blockade data file\n";
    out << "# schema: " << table.schema << "\n";
    out << "# schema-version: " << kSchemaVersion << "\n";
    out << "# units: " << kUnitsNote << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << table.columns[c];
    }
    out << "\n";
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            out << (c ? "," : "") << format_double(table.values[c][r]);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const DataTable& table)
{
    check_table(table);
    nlohmann::json doc;
    doc["schema"] = table.schema;
    doc["schema_version"] = kSchemaVersion;
    doc["units"] = kUnitsNote;
    doc["columns"] = table.columns;
    auto& data = doc["data"];
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        data[table.columns[c]] = table.values[c];
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << "\n";
}

void write_table(const std::filesystem::path& path, const DataTable& table,
                 const std::string& format)
{
    if (format == "csv") {
        write_csv(path, table);
    } else if (format == "json") {
        write_json(path, table);
    } else {
        throw std::invalid_argument("unknown output format: " + format);
    }
}

namespace {

DataTable load_csv_stream(std::istream& in)
{
    DataTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("schema:");
            if (pos != std::string::npos && line.find("schema-version") == std::string::npos) {
                auto value = line.substr(pos + 7);
                const auto start = value.find_first_not_of(' ');
                if (start != std::string::npos) table.schema = value.substr(start);
            }
            continue;
        }
        std::stringstream cells(line);
        std::string cell;
        if (!have_header) {
            while (std::getline(cells, cell, ',')) {
                table.columns.push_back(cell);
                table.values.emplace_back();
            }
            have_header = true;
            continue;
        }
        std::size_t c = 0;
        while (std::getline(cells, cell, ',')) {
            if (c >= table.columns.size()) {
                throw std::runtime_error("CSV row wider than the header");
            }
            table.values[c++].push_back(std::strtod(cell.c_str(), nullptr));
        }
        if (c != table.columns.size()) {
            throw std::runtime_error("CSV row narrower than the header");
        }
    }
    if (!have_header) throw std::runtime_error("CSV file has no header row");
    return table;
}

} // namespace

DataTable load_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    // JSON documents start with '{'; everything else is treated as CSV.
    char first = '\0';
    in >> first;
    in.seekg(0);
    if (first != '{') return load_csv_stream(in);

    nlohmann::json doc = nlohmann::json::parse(in);
    DataTable table;
    table.schema = doc.value("schema", "");
    for (const auto& name : doc.at("columns")) {
        table.columns.push_back(name.get<std::string>());
        table.values.push_back(doc.at("data").at(table.columns.back()).get<std::vector<double>>());
    }
    check_table(table);
    return table;
}

void write_manifest(const std::filesystem::path& data_path, const nlohmann::json& manifest)
{
    std::filesystem::path path = data_path;
    path += ".manifest.json";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << manifest.dump(2) << "\n";
}

} // namespace blockade::cli
