#include "ofdma/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <set>
#include <sstream>

namespace ofdma {

using nlohmann::json;

namespace {

void reject_unknown_fields(const json& doc, const std::set<std::string>& allowed)
{
    if (!doc.is_object())
        throw FormatError("top-level JSON value must be an object");
    for (const auto& [key, _] : doc.items())
        if (!allowed.contains(key))
            throw FormatError("unknown field \"" + key + "\"");
}

const json& require(const json& doc, const char* key)
{
    const auto it = doc.find(key);
    if (it == doc.end())
        throw FormatError(std::string("missing field \"") + key + "\"");
    return *it;
}

double as_number(const json& v, const char* what)
{
    if (!v.is_number())
        throw FormatError(std::string(what) + " must be a number");
    return v.get<double>();
}

std::size_t as_count(const json& v, const char* what)
{
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        throw FormatError(std::string(what) + " must be a nonnegative integer");
    return v.get<std::size_t>();
}

std::vector<double> as_vector(const json& v, std::size_t length, const char* what)
{
    if (!v.is_array() || v.size() != length)
        throw FormatError(std::string(what) + " must be an array of length " + std::to_string(length));
    std::vector<double> out;
    out.reserve(length);
    for (const auto& x : v)
        out.push_back(as_number(x, what));
    return out;
}

Matrix as_matrix(const json& v, std::size_t rows, std::size_t cols, const char* what)
{
    if (!v.is_array() || v.size() != rows)
        throw FormatError(std::string(what) + " must have K rows");
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto row = as_vector(v[r], cols, what);
        std::copy(row.begin(), row.end(), m.row(r).begin());
    }
    return m;
}

json parse_json(std::string_view text)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

void write_vector(std::ostream& os, std::span<const double> values)
{
    os << '[';
    for (std::size_t i = 0; i < values.size(); ++i)
        os << (i ? ", " : "") << format_double(values[i]);
    os << ']';
}

void write_matrix(std::ostream& os, const Matrix& m)
{
    os << "[\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
        os << "    ";
        write_vector(os, m.row(r));
        os << (r + 1 < m.rows() ? ",\n" : "\n");
    }
    os << "  ]";
}

} // namespace

std::string format_double(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::optional<Utility> parse_utility(std::string_view name)
{
    if (name == "h1")
        return Utility::H1;
    if (name == "h2")
        return Utility::H2;
    if (name == "h3")
        return Utility::H3;
    if (name == "h4")
        return Utility::H4;
    return std::nullopt;
}

InstanceFile parse_instance_file(std::string_view text)
{
    const json doc = parse_json(text);
    reject_unknown_fields(doc, {"schema_version", "problem", "utility", "K", "N", "gains", "noises", "caps",
                                "budget", "targets"});

    InstanceFile file;
    const json& version = require(doc, "schema_version");
    if (!version.is_number_integer())
        throw FormatError("schema_version must be an integer");
    file.schema_version = version.get<int>();
    if (file.schema_version != kSchemaVersion)
        throw FormatError("unsupported schema_version " + std::to_string(file.schema_version));

    const json& problem = require(doc, "problem");
    if (problem == "min_power")
        file.problem = Problem::MinPower;
    else if (problem == "max_utility")
        file.problem = Problem::MaxUtility;
    else
        throw FormatError("problem must be \"min_power\" or \"max_utility\"");

    if (const auto it = doc.find("utility"); it != doc.end()) {
        if (!it->is_string() || !parse_utility(it->get<std::string>()))
            throw FormatError("utility must be one of h1, h2, h3, h4");
        if (file.problem != Problem::MaxUtility)
            throw FormatError("utility only applies to max_utility problems");
        file.utility = parse_utility(it->get<std::string>());
    }

    SystemInstance& inst = file.instance;
    inst.num_receivers = as_count(require(doc, "K"), "K");
    inst.num_subcarriers = as_count(require(doc, "N"), "N");
    inst.gains = as_matrix(require(doc, "gains"), inst.num_receivers, inst.num_subcarriers, "gains");
    inst.noises = as_matrix(require(doc, "noises"), inst.num_receivers, inst.num_subcarriers, "noises");
    inst.subcarrier_caps = as_vector(require(doc, "caps"), inst.num_subcarriers, "caps");
    if (const auto it = doc.find("budget"); it != doc.end())
        inst.total_budget = as_number(*it, "budget");
    if (const auto it = doc.find("targets"); it != doc.end())
        inst.rate_targets = as_vector(*it, inst.num_receivers, "targets");
    return file;
}

std::string format_instance_file(const InstanceFile& file)
{
    const SystemInstance& inst = file.instance;
    std::ostringstream os;
    os << "{\n";
    os << "  \"schema_version\": " << file.schema_version << ",\n";
    os << "  \"problem\": \"" << to_string(file.problem) << "\",\n";
    if (file.utility)
        os << "  \"utility\": \"" << to_string(*file.utility) << "\",\n";
    os << "  \"K\": " << inst.num_receivers << ",\n";
    os << "  \"N\": " << inst.num_subcarriers << ",\n";
    os << "  \"gains\": ";
    write_matrix(os, inst.gains);
    os << ",\n  \"noises\": ";
    write_matrix(os, inst.noises);
    os << ",\n  \"caps\": ";
    write_vector(os, inst.subcarrier_caps);
    if (inst.total_budget)
        os << ",\n  \"budget\": " << format_double(*inst.total_budget);
    if (inst.rate_targets) {
        os << ",\n  \"targets\": ";
        write_vector(os, *inst.rate_targets);
    }
    os << "\n}\n";
    return os.str();
}

ThreePartitionInstance parse_partition_file(std::string_view text)
{
    const json doc = parse_json(text);
    reject_unknown_fields(doc, {"items", "bound", "groups"});
    ThreePartitionInstance tpi;
    const json& items = require(doc, "items");
    if (!items.is_array())
        throw FormatError("items must be an array of integers");
    for (const auto& a : items) {
        if (!a.is_number_integer())
            throw FormatError("items must be integers");
        tpi.items.push_back(a.get<std::int64_t>());
    }
    const json& bound = require(doc, "bound");
    if (!bound.is_number_integer())
        throw FormatError("bound must be an integer");
    tpi.bound = bound.get<std::int64_t>();
    tpi.groups = as_count(require(doc, "groups"), "groups");
    return tpi;
}

std::string format_partition_file(const ThreePartitionInstance& tpi)
{
    std::ostringstream os;
    os << "{\"items\": [";
    for (std::size_t i = 0; i < tpi.items.size(); ++i)
        os << (i ? ", " : "") << tpi.items[i];
    os << "], \"bound\": " << tpi.bound << ", \"groups\": " << tpi.groups << "}\n";
    return os.str();
}

std::string format_allocation_csv(const SystemInstance& instance, const Allocation& alloc)
{
    std::ostringstream os;
    os << "receiver,subcarrier,power,rate_contrib\n";
    for (std::size_t k = 0; k < alloc.powers.rows(); ++k) {
        for (std::size_t n = 0; n < alloc.powers.cols(); ++n) {
            const double p = alloc.powers(k, n);
            const double rate = p > 0.0 ? rate_bits(instance.snr_slope(k, n) * p) : 0.0;
            os << k + 1 << ',' << n + 1 << ',' << format_double(p) << ',' << format_double(rate) << '\n';
        }
    }
    return os.str();
}

} // namespace ofdma
