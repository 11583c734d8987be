#include <spmesl/csv_io.hpp>
#include <spmesl/errors.hpp>

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace spmesl::io {

namespace {

double parse_double(std::string_view field, std::size_t line, const std::filesystem::path& path)
{
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
        field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
        field.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw IOError(path.string() + ":" + std::to_string(line) + ": cannot parse '" +
                      std::string(field) + "' as a number");
    return v;
}

} // namespace

std::string format_double(double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    (void)ec;
    return {buf, ptr};
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IOError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IOError("cannot write " + path.string());
    out << content;
    if (!out)
        throw IOError("write failed for " + path.string());
}

Matrix read_matrix_csv(const std::filesystem::path& path)
{
    const auto text = read_file(path);
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string::npos)
            end = text.size();
        std::string_view line(text.data() + pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty())
            continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            auto comma = line.find(',', start);
            auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
            row.push_back(parse_double(field, line_no, path));
            if (comma == std::string_view::npos)
                break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw IOError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(rows.front().size()) + " fields, got " +
                          std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw IOError(path.string() + ": no data");
    return Matrix::from_rows(rows);
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m)
{
    std::string out;
    out.reserve(m.rows() * m.cols() * 24);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j)
                out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    write_file(path, out);
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path)
{
    auto p = csv_path;
    p += ".json";
    return p;
}

void write_standardized(const std::filesystem::path& csv_path, const DataMatrix& data)
{
    write_matrix_csv(csv_path, data.values);
    nlohmann::json j;
    j["n"] = data.n();
    j["p"] = data.p();
    j["col_means"] = data.col_means;
    j["col_scales"] = data.col_scales;
    j["standardized"] = data.standardized;
    write_file(sidecar_path(csv_path), j.dump(2) + "\n");
}

DataMatrix read_standardized(const std::filesystem::path& csv_path)
{
    DataMatrix d;
    d.values = read_matrix_csv(csv_path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(sidecar_path(csv_path)));
        d.col_means = j.at("col_means").get<std::vector<double>>();
        d.col_scales = j.at("col_scales").get<std::vector<double>>();
        d.standardized = j.value("standardized", true);
        if (j.at("n").get<std::size_t>() != d.n() || j.at("p").get<std::size_t>() != d.p())
            throw IOError("sidecar shape does not match " + csv_path.string());
    } catch (const nlohmann::json::exception& e) {
        throw IOError("bad sidecar for " + csv_path.string() + ": " + e.what());
    }
    if (d.col_means.size() != d.p() || d.col_scales.size() != d.p())
        throw IOError("sidecar vectors do not match p for " + csv_path.string());
    return d;
}

void write_edges_csv(const std::filesystem::path& path, const Matrix& omega)
{
    std::string out = "j,k,value\n";
    for (std::size_t j = 0; j < omega.rows(); ++j)
        for (std::size_t k = j + 1; k < omega.cols(); ++k)
            if (omega(j, k) != 0.0)
                out += std::to_string(j) + ',' + std::to_string(k) + ',' + format_double(omega(j, k)) + '\n';
    write_file(path, out);
}

} // namespace spmesl::io
