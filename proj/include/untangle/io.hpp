#ifndef UNTANGLE_IO_HPP
#define UNTANGLE_IO_HPP

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "engine.hpp"

namespace untangle {

using Json = nlohmann::json;

inline Json point_to_json(const Point& p) { return Json::array({to_string(p.x), to_string(p.y)}); }

inline Point point_from_json(const Json& j, Color c)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
        throw Error(ErrorCode::ParseError, "point must be [\"x\", \"y\"]");
    return Point{parse_coord(j[0].get<std::string>()), parse_coord(j[1].get<std::string>()), c};
}

inline Json to_json(const Matching& M)
{
    Json reds = Json::array(), blues = Json::array();
    for (const auto& p : M.points().reds())
        reds.push_back(point_to_json(p));
    for (const auto& p : M.points().blues())
        blues.push_back(point_to_json(p));
    return Json{{"reds", reds}, {"blues", blues}, {"mate", M.mates()}};
}

inline Matching matching_from_json(const Json& j)
{
    try {
        std::vector<Point> reds, blues;
        for (const auto& p : j.at("reds"))
            reds.push_back(point_from_json(p, Color::Red));
        for (const auto& p : j.at("blues"))
            blues.push_back(point_from_json(p, Color::Blue));
        return Matching(std::move(reds), std::move(blues), j.at("mate").get<std::vector<int>>());
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("bad matching json: ") + e.what());
    }
}

inline Json to_json(const std::vector<Flip>& steps)
{
    Json a = Json::array();
    for (const Flip& f : steps)
        a.push_back(Json::array({f.i, f.j}));
    return a;
}

inline Json to_json(const FlipSequence& s)
{
    return Json{{"start", to_json(s.start)}, {"steps", to_json(s.steps)}};
}

inline std::vector<Flip> steps_from_json(const Json& j)
{
    std::vector<Flip> out;
    try {
        for (const auto& f : j)
            out.push_back(Flip{f.at(0).get<int>(), f.at(1).get<int>()});
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("bad step list: ") + e.what());
    }
    return out;
}

// Replays the steps; throws NotCrossing on an invalid step.
inline FlipSequence sequence_from_json(const Json& j)
{
    if (!j.contains("start") || !j.contains("steps"))
        throw Error(ErrorCode::ParseError, "sequence needs start and steps");
    FlipSequence s(matching_from_json(j["start"]));
    for (const Flip& f : steps_from_json(j["steps"]))
        s.push(f);
    return s;
}

inline Json parse_json(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    out << text;
}

} // namespace untangle

#endif
