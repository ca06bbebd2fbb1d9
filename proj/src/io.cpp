#include "vzeno/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace vzeno::io {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ParseError(std::string("trailing characters in ") + what);
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(std::string("bad numeric field in ") + what + ": '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

double number_or(const json& j, const char* key, double fallback) {
    return j.contains(key) ? j.at(key).get<double>() : fallback;
}

}  // namespace

std::string record_to_csv(const EmissionRecord& record) {
    std::string out = "jump_time,pulse_index\n";
    for (std::size_t i = 0; i < record.jump_times.size(); ++i) {
        out += format_double(record.jump_times[i]);
        out += ',';
        if (!record.pulse_index.empty()) out += std::to_string(record.pulse_index[i]);
        out += '\n';
    }
    return out;
}

EmissionRecord record_from_csv(const std::string& text) {
    const auto rows = lines_of(text);
    if (rows.empty() || rows[0] != "jump_time,pulse_index")
        throw ParseError("record_from_csv: missing 'jump_time,pulse_index' header");
    EmissionRecord record;
    double prev = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto fields = split(rows[i], ',');
        if (fields.size() != 2) throw ParseError("record_from_csv: expected two fields per row");
        const double t = parse_double(fields[0], "jump_time");
        if (!(t > prev)) throw ParseError("record_from_csv: jump times must be increasing");
        prev = t;
        record.jump_times.push_back(t);
        if (!fields[1].empty()) {
            const double idx = parse_double(fields[1], "pulse_index");
            if (idx < 0 || idx != std::floor(idx))
                throw ParseError("record_from_csv: pulse_index must be a nonnegative integer");
            record.pulse_index.push_back(static_cast<std::int64_t>(idx));
        }
    }
    if (!record.pulse_index.empty() &&
        record.pulse_index.size() != record.jump_times.size())
        throw ParseError("record_from_csv: mixed attributed and unattributed rows");
    return record;
}

void record_metadata_into(const EmissionRecord& record, json& j) {
    j["params"] = {{"omega2", record.params.omega2},
                   {"omega3", record.params.omega3},
                   {"a3", record.params.a3}};
    j["schedule"] = {{"pulse_duration", record.schedule.pulse_duration},
                     {"gap", record.schedule.gap},
                     {"n_pulses", record.schedule.n_pulses},
                     {"total_duration", record.schedule.total_duration}};
    j["seed"] = record.seed;
}

json record_metadata(const EmissionRecord& record) {
    json j;
    record_metadata_into(record, j);
    return j;
}

EmissionRecord record_metadata_from(const json& j) {
    EmissionRecord record;
    try {
        const auto& p = j.at("params");
        record.params = {p.at("omega2").get<double>(), p.at("omega3").get<double>(),
                         p.at("a3").get<double>()};
        const auto& s = j.at("schedule");
        record.schedule.pulse_duration = number_or(s, "pulse_duration", 0.0);
        record.schedule.gap = number_or(s, "gap", 0.0);
        record.schedule.n_pulses = s.contains("n_pulses") ? s.at("n_pulses").get<std::size_t>() : 0;
        record.schedule.total_duration = number_or(s, "total_duration", 0.0);
        record.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("record_metadata_from: ") + e.what());
    }
    return record;
}

std::string outcomes_to_csv(const ideal::OutcomeSequence& seq) {
    std::string out = "index,outcome\n";
    for (std::size_t i = 0; i < seq.outcomes.size(); ++i) {
        out += std::to_string(i);
        out += (seq.outcomes[i] == ideal::Outcome::A) ? ",A\n" : ",PERP\n";
    }
    return out;
}

ideal::OutcomeSequence outcomes_from_csv(const std::string& text) {
    const auto rows = lines_of(text);
    if (rows.empty() || rows[0] != "index,outcome")
        throw ParseError("outcomes_from_csv: missing 'index,outcome' header");
    ideal::OutcomeSequence seq;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto fields = split(rows[i], ',');
        if (fields.size() != 2 || fields[0] != std::to_string(i - 1))
            throw ParseError("outcomes_from_csv: bad row index");
        if (fields[1] == "A")
            seq.outcomes.push_back(ideal::Outcome::A);
        else if (fields[1] == "PERP")
            seq.outcomes.push_back(ideal::Outcome::Perp);
        else
            throw ParseError("outcomes_from_csv: outcome must be A or PERP");
    }
    return seq;
}

std::string periods_to_csv(std::span<const periods::PeriodSample> samples) {
    std::string out = "kind,duration,pulse_count\n";
    for (const auto& s : samples) {
        out += (s.kind == periods::Kind::Light) ? "LIGHT," : "DARK,";
        out += format_double(s.duration);
        out += ',';
        if (s.pulse_count > 0) out += std::to_string(s.pulse_count);
        out += '\n';
    }
    return out;
}

std::vector<periods::PeriodSample> periods_from_csv(const std::string& text) {
    const auto rows = lines_of(text);
    if (rows.empty() || rows[0] != "kind,duration,pulse_count")
        throw ParseError("periods_from_csv: missing 'kind,duration,pulse_count' header");
    std::vector<periods::PeriodSample> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto fields = split(rows[i], ',');
        if (fields.size() != 3) throw ParseError("periods_from_csv: expected three fields");
        periods::PeriodSample s{};
        if (fields[0] == "LIGHT")
            s.kind = periods::Kind::Light;
        else if (fields[0] == "DARK")
            s.kind = periods::Kind::Dark;
        else
            throw ParseError("periods_from_csv: kind must be LIGHT or DARK");
        s.duration = parse_double(fields[1], "duration");
        s.pulse_count =
            fields[2].empty() ? 0 : static_cast<std::size_t>(parse_double(fields[2], "pulse_count"));
        out.push_back(s);
    }
    return out;
}

std::string master_trajectory_to_csv(std::span<const bloch::MasterState> samples) {
    std::string out = "t,p11,p22,p33,re12,re13,re23,im12,im13,im23\n";
    for (const auto& s : samples) {
        out += format_double(s.t);
        const double fields[] = {s.rho(0, 0).real(), s.rho(1, 1).real(), s.rho(2, 2).real(),
                                 s.rho(0, 1).real(), s.rho(0, 2).real(), s.rho(1, 2).real(),
                                 s.rho(0, 1).imag(), s.rho(0, 2).imag(), s.rho(1, 2).imag()};
        for (double f : fields) {
            out += ',';
            out += format_double(f);
        }
        out += '\n';
    }
    return out;
}

namespace {

json kind_summary_json(const periods::KindSummary& s) {
    json j{{"mean", s.mean}, {"stderr", s.se}, {"count", s.count}};
    if (s.geometric.n > 0) {
        j["geometric_fit"] = {{"p_hat", s.geometric.p_hat},
                              {"stderr", s.geometric.se_p},
                              {"chi2", s.geometric.chi2},
                              {"dof", s.geometric.dof},
                              {"p_value", s.geometric.p_value}};
    }
    return j;
}

}  // namespace

json period_report_to_json(const periods::PeriodReport& report) {
    json j;
    j["light"] = kind_summary_json(report.light);
    j["dark"] = kind_summary_json(report.dark);
    j["theory"] = {{"t_light", report.theory_light}, {"t_dark", report.theory_dark}};
    j["z_light"] = report.z_light;
    j["z_dark"] = report.z_dark;
    if (report.gap_threshold > 0.0) j["gap_threshold"] = report.gap_threshold;
    j["censoring"] = report.censoring;
    return j;
}

json validity_report_to_json(const ValidityReport& report) {
    json j;
    j["epsilons"] = {{"eps_p", report.eps.eps_p},
                     {"eps_r", report.eps.eps_r},
                     {"eps_a", report.eps.eps_a}};
    j["continuous_mode"] = report.continuous_mode;
    json conds = json::array();
    for (const auto& c : report.conditions)
        conds.push_back({{"name", c.name},
                         {"ratio", c.ratio},
                         {"threshold", c.threshold},
                         {"satisfied", c.satisfied}});
    j["conditions"] = std::move(conds);
    j["all_satisfied"] = report.all_satisfied();
    if (!report.note.empty()) j["note"] = report.note;
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("write_file: cannot open " + path.string());
    out << content;
    if (!out) throw ParseError("write_file: short write to " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("read_file: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace vzeno::io
