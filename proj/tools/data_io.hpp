// data_io.hpp — Column tables, CSV/JSON emission and run manifests

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace blockade::cli {

// Column-major numeric table with a named schema. All emitted data files are
// tables; every emitted file loads back through load_table.
struct DataTable {
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> values; // one vector per column

    std::size_t rows() const { return values.empty() ? 0 : values.front().size(); }
    const std::vector<double>& column(const std::string& name) const;
};

// CSV with a '#'-prefixed header block followed by a column-name row; floats
// are written with 17 significant digits so identical runs are byte-identical
// and values round-trip exactly.
void write_csv(const std::filesystem::path& path, const DataTable& table);

// Same table as a JSON document.
void write_json(const std::filesystem::path& path, const DataTable& table);

// Dispatches on format ("csv" or "json").
void write_table(const std::filesystem::path& path, const DataTable& table,
                 const std::string& format);

// Reads either format back (detected from the content, not the extension).
DataTable load_table(const std::filesystem::path& path);

// Sibling run manifest: <data path>.manifest.json.
void write_manifest(const std::filesystem::path& data_path, const nlohmann::json& manifest);

} // namespace blockade::cli
