#ifndef QSPT_KEYVALUE_HPP
#define QSPT_KEYVALUE_HPP

#include <qspt/error.hpp>

#include <charconv>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace qspt {

/// Flat `key = value` text with `#` comments. Lines are remembered so that
/// diagnostics can point at the offending entry.
class KeyValueFile {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static KeyValueFile parse(std::string_view text, std::string source = "<string>")
    {
        KeyValueFile kv;
        kv.source_ = std::move(source);
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t end = std::min(text.find('\n', pos), text.size());
            std::string_view line = text.substr(pos, end - pos);
            ++line_no;
            pos = end + 1;
            if (const auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) {
                if (end == text.size())
                    break;
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                kv.fail(line_no, "expected 'key = value'");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty())
                kv.fail(line_no, "empty key");
            if (value.empty())
                kv.fail(line_no, "key '" + key + "' has no value");
            if (kv.entries_.count(key))
                kv.fail(line_no, "duplicate key '" + key + "'");
            kv.entries_.emplace(key, Entry{value, line_no});
            if (end == text.size())
                break;
        }
        return kv;
    }

    static KeyValueFile load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
            throw Error(ErrorCode::ConfigError, path + ": cannot open file");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse(buf.str(), path);
    }

    bool empty() const noexcept { return entries_.empty(); }
    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    const std::string& source() const noexcept { return source_; }

    std::optional<std::string> get_string(const std::string& key) const
    {
        const Entry* e = find(key);
        if (!e)
            return std::nullopt;
        return e->value;
    }

    std::optional<double> get_double(const std::string& key) const
    {
        const Entry* e = find(key);
        if (!e)
            return std::nullopt;
        return parse_double(e->value, *e, key);
    }

    std::optional<long long> get_int(const std::string& key) const
    {
        const Entry* e = find(key);
        if (!e)
            return std::nullopt;
        long long v = 0;
        const char* first = e->value.data();
        const char* last = first + e->value.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last)
            fail(e->line, "key '" + key + "': expected an integer, got '" + e->value + "'");
        return v;
    }

    /// Accepts `re` or `re, im`.
    std::optional<std::complex<double>> get_complex(const std::string& key) const
    {
        const Entry* e = find(key);
        if (!e)
            return std::nullopt;
        const auto comma = e->value.find(',');
        if (comma == std::string::npos)
            return std::complex<double>(parse_double(e->value, *e, key), 0.0);
        const std::string re(trim(std::string_view(e->value).substr(0, comma)));
        const std::string im(trim(std::string_view(e->value).substr(comma + 1)));
        return std::complex<double>(parse_double(re, *e, key), parse_double(im, *e, key));
    }

    template <class T>
    T require(const std::optional<T>& v, const std::string& key) const
    {
        if (!v)
            throw Error(ErrorCode::ConfigError, source_ + ": missing required key '" + key + "'");
        return *v;
    }

    /// Keys present in the file but never looked up.
    std::vector<std::string> unused_keys() const
    {
        std::vector<std::string> out;
        for (const auto& [k, e] : entries_)
            if (!used_.count(k))
                out.push_back(k);
        return out;
    }

    int line_of(const std::string& key) const
    {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    [[noreturn]] void fail(int line, const std::string& msg) const
    {
        throw Error(ErrorCode::ConfigError, source_ + ":" + std::to_string(line) + ": " + msg);
    }

private:
    static std::string_view trim(std::string_view s)
    {
        const auto ws = " \t\r";
        const auto b = s.find_first_not_of(ws);
        if (b == std::string_view::npos)
            return {};
        const auto e = s.find_last_not_of(ws);
        return s.substr(b, e - b + 1);
    }

    const Entry* find(const std::string& key) const
    {
        auto it = entries_.find(key);
        if (it == entries_.end())
            return nullptr;
        used_.insert(key);
        return &it->second;
    }

    double parse_double(const std::string& text, const Entry& e, const std::string& key) const
    {
        // strtod rather than from_chars: the latter lacks floating-point
        // support in older libstdc++.
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (text.empty() || end != text.c_str() + text.size())
            fail(e.line, "key '" + key + "': expected a number, got '" + text + "'");
        return v;
    }

    std::string source_;
    std::map<std::string, Entry> entries_;
    mutable std::set<std::string> used_;
};

} // namespace qspt

#endif
