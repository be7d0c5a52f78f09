#include <hyperwalk/hrg.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include <hyperwalk/errors.hpp>

namespace hyperwalk {

namespace {

std::vector<PolarPoint> points_from_rows(std::vector<std::tuple<std::uint64_t, double, double>> rows) {
    std::sort(rows.begin(), rows.end());
    std::vector<PolarPoint> points;
    points.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (std::get<0>(rows[i]) != i) {
            throw InvalidArgument("graph file: vertex ids must be 0..N-1");
        }
        points.emplace_back(std::get<1>(rows[i]), std::get<2>(rows[i]));
    }
    return points;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) {
        s.remove_suffix(1);
    }
    while (!s.empty() && s.front() == ' ') {
        s.remove_prefix(1);
    }
    return s;
}

template <typename T>
T parse_number(std::string_view s) {
    s = trim(s);
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw InvalidArgument(fmt::format("csv: bad number '{}'", s));
    }
    return value;
}

// Data lines of a CSV text, header skipped.
std::vector<std::vector<std::string_view>> csv_rows(std::string_view text) {
    std::vector<std::vector<std::string_view>> rows;
    bool header = true;
    for (auto line : split(text, '\n')) {
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (header) {
            header = false;
            continue;
        }
        rows.push_back(split(line, ','));
    }
    return rows;
}

} // namespace

std::string to_json(const HrgGraph& g) {
    const auto& p = g.params;
    std::string out = fmt::format(R"({{"params":{{"alpha":{:.17g},"nu":{:.17g},"n":{:.17g},"R":{:.17g}}},"vertices":[)",
                                  p.alpha(), p.nu(), p.n(), p.R());
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        out += fmt::format("{}[{},{:.17g},{:.17g}]", v == 0 ? "" : ",", v, g.points[v].r(), g.points[v].theta());
    }
    out += R"(],"edges":[)";
    bool first = true;
    for (auto [u, v] : g.graph.edge_list()) {
        out += fmt::format("{}[{},{}]", first ? "" : ",", u, v);
        first = false;
    }
    out += "]}\n";
    return out;
}

HrgGraph from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(fmt::format("graph json: {}", e.what()));
    }
    try {
        const auto& pj = j.at("params");
        ModelParams params(pj.at("alpha").get<double>(), pj.at("nu").get<double>(), pj.at("n").get<double>());
        std::vector<std::tuple<std::uint64_t, double, double>> rows;
        for (const auto& row : j.at("vertices")) {
            rows.emplace_back(row.at(0).get<std::uint64_t>(), row.at(1).get<double>(), row.at(2).get<double>());
        }
        std::vector<PolarPoint> points = points_from_rows(std::move(rows));
        std::vector<Edge> edges;
        for (const auto& row : j.at("edges")) {
            edges.emplace_back(row.at(0).get<VertexId>(), row.at(1).get<VertexId>());
        }
        Graph graph = Graph::from_edges(points.size(), edges);
        return HrgGraph{params, std::move(points), std::move(graph)};
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(fmt::format("graph json: {}", e.what()));
    }
}

void write_json_file(const HrgGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidArgument(fmt::format("cannot write {}", path));
    }
    out << to_json(g);
}

HrgGraph read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument(fmt::format("cannot read {}", path));
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

std::string vertices_csv(const HrgGraph& g) {
    std::string out = "id,r,theta\n";
    for (std::size_t v = 0; v < g.num_vertices(); ++v) {
        out += fmt::format("{},{:.17g},{:.17g}\n", v, g.points[v].r(), g.points[v].theta());
    }
    return out;
}

std::string edges_csv(const HrgGraph& g) {
    std::string out = "u,v\n";
    for (auto [u, v] : g.graph.edge_list()) {
        out += fmt::format("{},{}\n", u, v);
    }
    return out;
}

HrgGraph from_csv(const ModelParams& params, std::string_view vertices, std::string_view edges) {
    std::vector<std::tuple<std::uint64_t, double, double>> rows;
    for (const auto& row : csv_rows(vertices)) {
        if (row.size() != 3) {
            throw InvalidArgument("vertices csv: expected id,r,theta");
        }
        rows.emplace_back(parse_number<std::uint64_t>(row[0]), parse_number<double>(row[1]),
                          parse_number<double>(row[2]));
    }
    std::vector<PolarPoint> points = points_from_rows(std::move(rows));
    std::vector<Edge> edge_list;
    for (const auto& row : csv_rows(edges)) {
        if (row.size() != 2) {
            throw InvalidArgument("edges csv: expected u,v");
        }
        edge_list.emplace_back(parse_number<VertexId>(row[0]), parse_number<VertexId>(row[1]));
    }
    Graph graph = Graph::from_edges(points.size(), edge_list);
    return HrgGraph{params, std::move(points), std::move(graph)};
}

} // namespace hyperwalk
