#ifndef IMGAUTH_GALLERY_HPP
#define IMGAUTH_GALLERY_HPP

#include <cstdint>
#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <span>
#include <string_view>
#include <string>
#include <vector>

#include "imgauth/error.hpp"
#include "imgauth/image.hpp"

namespace imgauth {

struct GalleryEntry {
    std::string label;
    std::string image_path;  // relative to the gallery root
};

/// Labelled image set described by `<root>/manifest.tsv`: one "label<TAB>relative_path"
/// line per image, UTF-8, LF endings.
struct Gallery {
    std::filesystem::path root;
    std::vector<GalleryEntry> entries;
    std::string checksum;  // FNV-1a 64 of the manifest bytes, hex

    /// Distinct labels in order of first appearance; a label's index is its class id.
    std::vector<std::string> labels() const {
        std::vector<std::string> out;
        for (const auto& e : entries)
            if (std::find(out.begin(), out.end(), e.label) == out.end()) out.push_back(e.label);
        return out;
    }

    std::size_t label_index(const std::string& label) const {
        const auto ls = labels();
        return static_cast<std::size_t>(std::find(ls.begin(), ls.end(), label) - ls.begin());
    }

    std::string full_path(const GalleryEntry& e) const { return (root / e.image_path).string(); }
};

inline std::string fnv1a_hex(std::span<const std::uint8_t> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::vector<GalleryEntry> parse_manifest(std::string_view text) {
    std::vector<GalleryEntry> out;
    std::size_t line_no = 0, pos = 0, line_start = 0;
    while (pos <= text.size()) {
        if (pos == text.size() || text[pos] == '\n') {
            ++line_no;
            std::string_view line = text.substr(line_start, pos - line_start);
            if (!line.empty() && line.back() == '\r') throw DecodeError("manifest line " + std::to_string(line_no) + " has CRLF ending", line_start);
            if (!line.empty() && line.front() != '#') {
                const auto tab = line.find('\t');
                if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size())
                    throw DecodeError("manifest line " + std::to_string(line_no) + " is not 'label<TAB>path'", line_start);
                out.push_back({std::string(line.substr(0, tab)), std::string(line.substr(tab + 1))});
            }
            line_start = pos + 1;
        }
        ++pos;
    }
    return out;
}

/// Reads the manifest and checks that every listed file decodes as PGM.
inline Gallery load_gallery(const std::filesystem::path& root) {
    Gallery g;
    g.root = root;
    const auto manifest = root / "manifest.tsv";
    const auto bytes = read_file(manifest.string());
    g.checksum = fnv1a_hex(bytes);
    g.entries = parse_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
    if (g.entries.empty()) throw ParameterError("gallery '" + root.string() + "' lists no images");
    for (const auto& e : g.entries) (void)read_pgm_file(g.full_path(e));
    return g;
}

inline std::string manifest_text(const std::vector<GalleryEntry>& entries) {
    std::string s;
    for (const auto& e : entries) s += e.label + "\t" + e.image_path + "\n";
    return s;
}

}  // namespace imgauth

#endif  // IMGAUTH_GALLERY_HPP
