#pragma once

// Environment pair file format. The native encoding is a small structured
// text document:
//
//   physical:
//     boundary: [(-6, -6), (6, -6), (6, 6), (-6, 6)]
//     obstacles: [
//       [(-4, -4), (-1, -4), (-1, -1), (-4, -1)]
//     ]
//     dynamic: [{radius: 0.5}]
//   virtual:
//     ...
//
// A JSON rendering of the same schema is accepted as well (detected by a
// leading '{'). Coordinates are decimal meters; serialization uses
// shortest round-trip formatting so load(serialize(load(x))) reproduces
// vertex lists bit-exactly.

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rdw/env.hpp"

namespace rdw {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

class EnvTokenizer {
public:
    explicit EnvTokenizer(const std::string& text) : text_(text) {}

    struct Token {
        enum Kind { Word, Number, Punct, End } kind = End;
        std::string word;
        double number = 0.0;
        char punct = 0;
    };

    Token next() {
        skip_space();
        Token t;
        if (pos_ >= text_.size()) return t;
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c))) {
            t.kind = Token::Word;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                t.word += text_[pos_++];
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
            const char* begin = text_.data() + pos_;
            const char* end = text_.data() + text_.size();
            double value = 0.0;
            auto res = std::from_chars(begin, end, value);
            if (res.ec != std::errc{}) throw ParseError("invalid number near offset " + std::to_string(pos_));
            pos_ += static_cast<std::size_t>(res.ptr - begin);
            t.kind = Token::Number;
            t.number = value;
            return t;
        }
        if (c == ':' || c == '[' || c == ']' || c == '(' || c == ')' || c == '{' || c == '}' || c == ',') {
            t.kind = Token::Punct;
            t.punct = c;
            ++pos_;
            return t;
        }
        throw ParseError(std::string("unexpected character '") + c + "' at offset " + std::to_string(pos_));
    }

private:
    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

class EnvTextParser {
public:
    explicit EnvTextParser(const std::string& text) : tok_(text) { advance(); }

    EnvPair parse() {
        EnvPair pair;
        bool have_phys = false, have_virt = false;
        while (cur_.kind == EnvTokenizer::Token::Word) {
            std::string section = cur_.word;
            advance();
            expect_punct(':');
            if (section == "physical") {
                pair.phys = parse_section();
                have_phys = true;
            } else if (section == "virtual") {
                pair.virt = parse_section();
                have_virt = true;
            } else {
                throw ParseError("unknown section '" + section + "'");
            }
        }
        if (cur_.kind != EnvTokenizer::Token::End) throw ParseError("trailing content after sections");
        if (!have_phys || !have_virt) throw ParseError("document needs both 'physical:' and 'virtual:' sections");
        return pair;
    }

private:
    Environment parse_section() {
        Environment env;
        bool have_boundary = false;
        while (cur_.kind == EnvTokenizer::Token::Word && cur_.word != "physical" && cur_.word != "virtual") {
            std::string key = cur_.word;
            advance();
            expect_punct(':');
            if (key == "boundary") {
                env.boundary = parse_point_list();
                have_boundary = true;
            } else if (key == "obstacles") {
                expect_punct('[');
                if (!accept_punct(']')) {
                    do {
                        env.static_obstacles.push_back(parse_point_list());
                    } while (accept_punct(','));
                    expect_punct(']');
                }
            } else if (key == "dynamic") {
                expect_punct('[');
                if (!accept_punct(']')) {
                    do {
                        env.dynamic_obstacles.push_back(parse_disc());
                    } while (accept_punct(','));
                    expect_punct(']');
                }
            } else {
                throw ParseError("unknown key '" + key + "'");
            }
        }
        if (!have_boundary) throw ParseError("section missing 'boundary:'");
        return env;
    }

    Polygon parse_point_list() {
        Polygon poly;
        expect_punct('[');
        if (!accept_punct(']')) {
            do {
                poly.verts.push_back(parse_point());
            } while (accept_punct(','));
            expect_punct(']');
        }
        return poly;
    }

    Point2 parse_point() {
        expect_punct('(');
        double x = expect_number();
        expect_punct(',');
        double y = expect_number();
        expect_punct(')');
        return {x, y};
    }

    DynamicDisc parse_disc() {
        DynamicDisc disc;
        expect_punct('{');
        do {
            if (cur_.kind != EnvTokenizer::Token::Word) throw ParseError("expected key in dynamic entry");
            std::string key = cur_.word;
            advance();
            expect_punct(':');
            if (key == "radius") {
                disc.radius = expect_number();
            } else {
                throw ParseError("unknown dynamic key '" + key + "'");
            }
        } while (accept_punct(','));
        expect_punct('}');
        return disc;
    }

    void advance() { cur_ = tok_.next(); }

    void expect_punct(char c) {
        if (cur_.kind != EnvTokenizer::Token::Punct || cur_.punct != c)
            throw ParseError(std::string("expected '") + c + "'");
        advance();
    }

    bool accept_punct(char c) {
        if (cur_.kind == EnvTokenizer::Token::Punct && cur_.punct == c) {
            advance();
            return true;
        }
        return false;
    }

    double expect_number() {
        if (cur_.kind != EnvTokenizer::Token::Number) throw ParseError("expected a number");
        double v = cur_.number;
        advance();
        return v;
    }

    EnvTokenizer tok_;
    EnvTokenizer::Token cur_;
};

inline Environment environment_from_json(const nlohmann::json& j, const char* label) {
    Environment env;
    if (!j.contains("boundary")) throw ParseError(std::string(label) + ": missing boundary");
    for (const auto& pt : j.at("boundary")) env.boundary.verts.push_back({pt.at(0), pt.at(1)});
    if (j.contains("obstacles")) {
        for (const auto& ob : j.at("obstacles")) {
            Polygon poly;
            for (const auto& pt : ob) poly.verts.push_back({pt.at(0), pt.at(1)});
            env.static_obstacles.push_back(std::move(poly));
        }
    }
    if (j.contains("dynamic")) {
        for (const auto& d : j.at("dynamic")) {
            DynamicDisc disc;
            disc.radius = d.at("radius");
            env.dynamic_obstacles.push_back(std::move(disc));
        }
    }
    return env;
}

inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

inline EnvPair load_environment_pair(const std::string& source, const std::string& name = "") {
    EnvPair pair;
    std::size_t first = source.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && source[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(source);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what());
        }
        try {
            if (!j.contains("physical") || !j.contains("virtual"))
                throw ParseError("document needs both 'physical' and 'virtual' objects");
            pair.phys = detail::environment_from_json(j.at("physical"), "physical");
            pair.virt = detail::environment_from_json(j.at("virtual"), "virtual");
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("bad JSON schema: ") + e.what());
        }
    } else {
        detail::EnvTextParser parser(source);
        pair = parser.parse();
    }
    pair.name = name;
    validate_environment(pair.phys, "physical");
    validate_environment(pair.virt, "virtual");
    return pair;
}

inline EnvPair load_environment_pair_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open environment file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_environment_pair(buf.str(), path);
}

inline std::string serialize_environment_pair(const EnvPair& pair) {
    std::ostringstream out;
    auto write_points = [&](const Polygon& poly) {
        out << "[";
        for (std::size_t i = 0; i < poly.verts.size(); ++i) {
            if (i) out << ", ";
            out << "(" << detail::format_double(poly.verts[i].x) << ", "
                << detail::format_double(poly.verts[i].y) << ")";
        }
        out << "]";
    };
    auto write_env = [&](const Environment& env, const char* label) {
        out << label << ":\n  boundary: ";
        write_points(env.boundary);
        out << "\n";
        if (!env.static_obstacles.empty()) {
            out << "  obstacles: [\n";
            for (std::size_t i = 0; i < env.static_obstacles.size(); ++i) {
                out << "    ";
                write_points(env.static_obstacles[i]);
                out << (i + 1 < env.static_obstacles.size() ? ",\n" : "\n");
            }
            out << "  ]\n";
        }
        if (!env.dynamic_obstacles.empty()) {
            out << "  dynamic: [";
            for (std::size_t i = 0; i < env.dynamic_obstacles.size(); ++i) {
                if (i) out << ", ";
                out << "{radius: " << detail::format_double(env.dynamic_obstacles[i].radius) << "}";
            }
            out << "]\n";
        }
    };
    write_env(pair.phys, "physical");
    write_env(pair.virt, "virtual");
    return out.str();
}

namespace detail {

inline Polygon make_polygon(std::initializer_list<Point2> pts) {
    Polygon poly;
    poly.verts.assign(pts);
    return poly;
}

inline Environment corridor_env_12x12() {
    Environment env;
    env.boundary = make_polygon({{-6, -6}, {6, -6}, {6, 6}, {-6, 6}});
    env.static_obstacles = {
        make_polygon({{-4, -4}, {-1, -4}, {-1, -1}, {-4, -1}}),
        make_polygon({{1, -4}, {4, -4}, {4, -1}, {1, -1}}),
        make_polygon({{1, 1}, {4, 1}, {4, 4}, {1, 4}}),
        make_polygon({{-4, 1}, {-1, 1}, {-1, 4}, {-4, 4}}),
    };
    return env;
}

inline Environment corridor_env_17x12() {
    Environment env;
    env.boundary = make_polygon({{-11, -6}, {6, -6}, {6, 6}, {-11, 6}});
    env.static_obstacles = {
        make_polygon({{-4, -4}, {-1, -4}, {-1, -1}, {-4, -1}}),
        make_polygon({{1, -4}, {4, -4}, {4, -1}, {1, -1}}),
        make_polygon({{1, 1}, {4, 1}, {4, 4}, {1, 4}}),
        make_polygon({{-4, 1}, {-1, 1}, {-1, 4}, {-4, 4}}),
        make_polygon({{-9, 1}, {-6, 1}, {-6, 4}, {-9, 4}}),
        make_polygon({{-9, -4}, {-6, -4}, {-6, -1}, {-9, -1}}),
    };
    return env;
}

inline Environment blocks_env_10x10() {
    Environment env;
    env.boundary = make_polygon({{-5, -5}, {5, -5}, {5, 5}, {-5, 5}});
    env.static_obstacles = {
        make_polygon({{-4.5, -4.5}, {-2.5, -4.5}, {-2.5, -2.5}, {-4.5, -2.5}}),
        make_polygon({{-2, -1}, {2, -1}, {2, 1}, {-2, 1}}),
        make_polygon({{-2, 4}, {2, 4}, {2, 5}, {-2, 5}}),
    };
    return env;
}

inline Environment cluttered_env_20x20() {
    Environment env;
    env.boundary = make_polygon({{10, -10}, {10, 10}, {-10, 10}, {-10, -10}});
    env.static_obstacles = {
        make_polygon({{-4.5, -4.5}, {-2.5, -4.5}, {-3.5, -2.5}}),
        make_polygon({{0, 2}, {2, 1}, {1, -2}, {-1, -2}, {-2, 1}}),
        make_polygon({{-2, 4}, {2, 4}, {2, 5}, {-2, 5}}),
        make_polygon({{-8.5, 8.5}, {-8.5, 2.5}, {-6.5, 2.5}, {-7, 7}, {-2.5, 6.5}, {-2.5, 8.5}}),
        make_polygon({{-8, -1}, {-8, -2}, {-7, -2}, {-7, -1}}),
        make_polygon({{-7, -3}, {-7, -4}, {-6, -4}, {-6, -3}}),
        make_polygon({{-9, -5}, {-9, -7}, {-8, -7}, {-8, -5}}),
        make_polygon({{-6, -9}, {-3, -7}, {-3, -6}, {-7, -8}}),
        make_polygon({{3, -4}, {3, -8}, {7, -8}, {7, -4}}),
        make_polygon({{5, 9}, {4, 8}, {8, 4}, {8, 8}}),
    };
    return env;
}

inline Environment open_dynamic_env_17x12() {
    Environment env;
    env.boundary = make_polygon({{-11, -6}, {6, -6}, {6, 6}, {-11, 6}});
    env.dynamic_obstacles.assign(4, DynamicDisc{0.5, {}, 0.05});
    return env;
}

}  // namespace detail

// The four built-in experiment environment pairs. Experiment 3 reuses the
// physical corridor layout of experiment 1 with the cluttered virtual
// layout of experiment 2; experiment 4 pairs the experiment-2 physical
// layout with an open room containing four dynamic discs (trajectories
// are produced per trial by the locomotion generators).
inline EnvPair builtin_pair(int id) {
    EnvPair pair;
    switch (id) {
        case 1:
            pair.phys = detail::corridor_env_12x12();
            pair.virt = detail::corridor_env_17x12();
            pair.name = "experiment-1";
            break;
        case 2:
            pair.phys = detail::blocks_env_10x10();
            pair.virt = detail::cluttered_env_20x20();
            pair.name = "experiment-2";
            break;
        case 3:
            pair.phys = detail::corridor_env_12x12();
            pair.virt = detail::cluttered_env_20x20();
            pair.name = "experiment-3";
            break;
        case 4:
            pair.phys = detail::blocks_env_10x10();
            pair.virt = detail::open_dynamic_env_17x12();
            pair.name = "experiment-4";
            break;
        default:
            throw std::invalid_argument("builtin_pair: id must be 1..4");
    }
    validate_environment(pair.phys, "physical");
    validate_environment(pair.virt, "virtual");
    return pair;
}

}  // namespace rdw
