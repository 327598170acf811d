#pragma once

#include "ftd/common.hpp"

#include <charconv>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace ftd
{
    /// Line-oriented reader for the plain-text formats: skips blank lines and '#' comments and
    /// tracks line numbers for error messages.
    class LineReader
    {
    public:
        explicit LineReader(std::istream &in) : _in(in) {}

        /// Next non-comment line split on whitespace; false at end of input.
        bool next()
        {
            std::string line;
            while (std::getline(_in, line)) {
                ++_line;
                auto first = line.find_first_not_of(" \t\r");
                if (first == std::string::npos || line[first] == '#')
                    continue;
                _fields.clear();
                std::istringstream ss(line);
                for (std::string f; ss >> f;)
                    _fields.push_back(f);
                return true;
            }
            return false;
        }

        const std::vector<std::string> &expect_fields(std::size_t count, const std::string &what)
        {
            if (! next())
                throw ParseError("line " + std::to_string(_line + 1) + ": unexpected end of input, expected " + what);
            if (_fields.size() != count)
                throw ParseError("line " + std::to_string(_line) + ": expected " + what);
            return _fields;
        }

        const std::vector<std::string> &fields() const { return _fields; }
        std::size_t line_number() const { return _line; }

    private:
        std::istream &_in;
        std::size_t _line = 0;
        std::vector<std::string> _fields;
    };

    template <typename Int>
    Int parse_int(const std::string &s, std::size_t line)
    {
        Int value{};
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw ParseError("line " + std::to_string(line) + ": expected an integer, got \"" + s + "\"");
        return value;
    }

    inline double parse_double(const std::string &s, std::size_t line)
    {
        try {
            std::size_t used = 0;
            double value = std::stod(s, &used);
            if (used == s.size())
                return value;
        }
        catch (const std::exception &) {
        }
        throw ParseError("line " + std::to_string(line) + ": expected a number, got \"" + s + "\"");
    }
}
