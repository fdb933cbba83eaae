#include "pvar/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pvar {

json step_function_to_json(const StepFunction& f) {
    json j;
    j["field"] = field_name(f.field());
    j["breakpoints"] = f.breakpoints();
    json values = json::array();
    for (const auto& v : f.values()) {
        if (f.field() == Field::Real)
            values.push_back(v.real());
        else
            values.push_back(json::array({v.real(), v.imag()}));
    }
    j["values"] = std::move(values);
    return j;
}

StepFunction step_function_from_json(const json& j) {
    if (!j.is_object() || !j.contains("field") || !j.contains("breakpoints") ||
        !j.contains("values"))
        throw std::invalid_argument(
            "step function JSON needs fields \"field\", \"breakpoints\", \"values\"");
    const std::string field_str = j.at("field").get<std::string>();
    Field field;
    if (field_str == "real")
        field = Field::Real;
    else if (field_str == "complex")
        field = Field::Complex;
    else
        throw std::invalid_argument("unknown field \"" + field_str + "\"");
    auto breakpoints = j.at("breakpoints").get<std::vector<double>>();
    std::vector<complexd> values;
    values.reserve(j.at("values").size());
    for (const auto& entry : j.at("values")) {
        if (field == Field::Real) {
            if (!entry.is_number())
                throw std::invalid_argument("real step function values must be numbers");
            values.emplace_back(entry.get<double>(), 0.0);
        } else {
            if (!entry.is_array() || entry.size() != 2)
                throw std::invalid_argument(
                    "complex step function values must be [re,im] pairs");
            values.emplace_back(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return StepFunction(std::move(breakpoints), std::move(values), field);
}

namespace {

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

std::string step_function_to_csv(const StepFunction& f) {
    if (f.field() != Field::Real)
        throw std::invalid_argument("CSV format supports real step functions only");
    std::string out = "t,value\n";
    for (std::size_t i = 0; i < f.values().size(); ++i) {
        out += format_double(f.breakpoints()[i]);
        out += ',';
        out += format_double(f.values()[i].real());
        out += '\n';
    }
    return out;
}

StepFunction step_function_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<double> breakpoints;
    std::vector<double> values;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("t,", 0) == 0) continue;  // header
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("CSV line " + std::to_string(line_no) +
                                        ": expected \"t,value\"");
        try {
            breakpoints.push_back(std::stod(line.substr(0, comma)));
            values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw std::invalid_argument("CSV line " + std::to_string(line_no) +
                                        ": malformed number");
        }
    }
    return make_step_function(std::move(breakpoints), std::move(values));
}

StepFunction read_step_function(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    if (path.extension() == ".csv") {
        std::ostringstream buf;
        buf << in.rdbuf();
        return step_function_from_csv(buf.str());
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
    return step_function_from_json(j);
}

void write_step_function(const std::filesystem::path& path, const StepFunction& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    if (path.extension() == ".csv")
        out << step_function_to_csv(f);
    else
        out << step_function_to_json(f).dump(2) << '\n';
}

json witness_to_json(const PartitionWitness& w) {
    return json{{"indices", w.indices}, {"attained", w.attained}};
}

json small_value_report_to_json(const SmallValueReport& report) {
    json j{{"pass", report.pass},
           {"max_attained", report.max_attained},
           {"threshold", report.threshold},
           {"worst_selection", report.worst_selection},
           {"conservatism", report.conservatism},
           {"mode", report.mode == VerifyMode::Exhaustive ? "exhaustive" : "sampled"},
           {"small_index_count", report.small_index_count},
           {"cross_check_max", report.cross_check_max},
           {"cross_check_ok", report.cross_check_ok}};
    if (report.seed) j["seed"] = *report.seed;
    return j;
}

}  // namespace pvar
