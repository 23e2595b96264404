// SPDX-License-Identifier: MIT
// Copyright (c) 2026 moteval contributors
//
// Minimal ZIP archive access for submission handling: reads stored and
// deflated entries (decompression via zlib), writes stored entries. Zip64
// archives are rejected.
#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "moteval/core.hpp"

namespace moteval {

struct ZipEntry {
    std::string name;
    std::string data;
};

namespace detail {

inline std::uint16_t rd16(const std::string& b, std::size_t off) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(b[off]) |
                                      (static_cast<unsigned char>(b[off + 1]) << 8));
}

inline std::uint32_t rd32(const std::string& b, std::size_t off) {
    return static_cast<std::uint32_t>(static_cast<unsigned char>(b[off])) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 3])) << 24);
}

inline void wr16(std::string& b, std::uint16_t v) {
    b.push_back(static_cast<char>(v & 0xff));
    b.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void wr32(std::string& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline std::string inflate_raw(const char* src, std::size_t src_len, std::size_t dst_len) {
    std::string out(dst_len, '\0');
    z_stream strm{};
    if (inflateInit2(&strm, -MAX_WBITS) != Z_OK) throw InputError("zlib init failed");
    strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(src));
    strm.avail_in = static_cast<uInt>(src_len);
    strm.next_out = reinterpret_cast<Bytef*>(out.data());
    strm.avail_out = static_cast<uInt>(dst_len);
    const int rc = inflate(&strm, Z_FINISH);
    inflateEnd(&strm);
    if (rc != Z_STREAM_END || strm.total_out != dst_len)
        throw InputError("zip entry failed to decompress");
    return out;
}

}  // namespace detail

inline std::vector<ZipEntry> read_zip(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open archive: " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    // End-of-central-directory record: scan backwards over a possible comment.
    static const char eocd_sig[4] = {'P', 'K', 0x05, 0x06};
    if (bytes.size() < 22) throw InputError("not a zip archive: " + path.string());
    std::size_t eocd = std::string::npos;
    const std::size_t scan_from = bytes.size() >= 22 + 65535 ? bytes.size() - 22 - 65535 : 0;
    for (std::size_t i = bytes.size() - 22; ; --i) {
        if (std::memcmp(bytes.data() + i, eocd_sig, 4) == 0) {
            eocd = i;
            break;
        }
        if (i == scan_from) break;
    }
    if (eocd == std::string::npos) throw InputError("not a zip archive: " + path.string());

    const std::uint16_t count = detail::rd16(bytes, eocd + 10);
    const std::uint32_t cd_offset = detail::rd32(bytes, eocd + 16);
    if (cd_offset == 0xffffffffu) throw InputError("zip64 archives are not supported");

    std::vector<ZipEntry> entries;
    std::size_t pos = cd_offset;
    for (int k = 0; k < count; ++k) {
        if (pos + 46 > bytes.size() || detail::rd32(bytes, pos) != 0x02014b50u)
            throw InputError("corrupt zip central directory: " + path.string());
        const std::uint16_t method = detail::rd16(bytes, pos + 10);
        const std::uint32_t crc = detail::rd32(bytes, pos + 16);
        const std::uint32_t csize = detail::rd32(bytes, pos + 20);
        const std::uint32_t usize = detail::rd32(bytes, pos + 24);
        const std::uint16_t name_len = detail::rd16(bytes, pos + 28);
        const std::uint16_t extra_len = detail::rd16(bytes, pos + 30);
        const std::uint16_t comment_len = detail::rd16(bytes, pos + 32);
        const std::uint32_t local_off = detail::rd32(bytes, pos + 42);
        if (csize == 0xffffffffu || usize == 0xffffffffu || local_off == 0xffffffffu)
            throw InputError("zip64 archives are not supported");
        std::string name = bytes.substr(pos + 46, name_len);
        pos += 46 + name_len + extra_len + comment_len;

        if (!name.empty() && name.back() == '/') continue;  // directory entry

        if (local_off + 30 > bytes.size() || detail::rd32(bytes, local_off) != 0x04034b50u)
            throw InputError("corrupt zip local header: " + path.string());
        const std::uint16_t lnl = detail::rd16(bytes, local_off + 26);
        const std::uint16_t lxl = detail::rd16(bytes, local_off + 28);
        const std::size_t data_off = local_off + 30 + lnl + lxl;
        if (data_off + csize > bytes.size())
            throw InputError("truncated zip entry: " + name);

        std::string data;
        if (method == 0) {
            data = bytes.substr(data_off, csize);
        } else if (method == 8) {
            data = detail::inflate_raw(bytes.data() + data_off, csize, usize);
        } else {
            throw InputError("unsupported zip compression method for entry " + name);
        }
        const auto actual = crc32(0L, reinterpret_cast<const Bytef*>(data.data()),
                                  static_cast<uInt>(data.size()));
        if (static_cast<std::uint32_t>(actual) != crc)
            throw InputError("zip entry crc mismatch: " + name);
        entries.push_back({std::move(name), std::move(data)});
    }
    return entries;
}

// Writes a flat archive with stored (uncompressed) entries.
inline void write_zip(const std::filesystem::path& path, const std::vector<ZipEntry>& entries) {
    std::string out;
    std::vector<std::pair<std::uint32_t, const ZipEntry*>> offsets;
    for (const auto& e : entries) {
        const auto crc = static_cast<std::uint32_t>(
            crc32(0L, reinterpret_cast<const Bytef*>(e.data.data()), static_cast<uInt>(e.data.size())));
        offsets.emplace_back(static_cast<std::uint32_t>(out.size()), &e);
        detail::wr32(out, 0x04034b50u);
        detail::wr16(out, 20);  // version needed
        detail::wr16(out, 0);   // flags
        detail::wr16(out, 0);   // method: stored
        detail::wr16(out, 0);   // time
        detail::wr16(out, 0);   // date
        detail::wr32(out, crc);
        detail::wr32(out, static_cast<std::uint32_t>(e.data.size()));
        detail::wr32(out, static_cast<std::uint32_t>(e.data.size()));
        detail::wr16(out, static_cast<std::uint16_t>(e.name.size()));
        detail::wr16(out, 0);  // extra
        out += e.name;
        out += e.data;
    }
    const std::uint32_t cd_start = static_cast<std::uint32_t>(out.size());
    for (const auto& [off, e] : offsets) {
        const auto crc = static_cast<std::uint32_t>(
            crc32(0L, reinterpret_cast<const Bytef*>(e->data.data()), static_cast<uInt>(e->data.size())));
        detail::wr32(out, 0x02014b50u);
        detail::wr16(out, 20);  // version made by
        detail::wr16(out, 20);  // version needed
        detail::wr16(out, 0);
        detail::wr16(out, 0);
        detail::wr16(out, 0);
        detail::wr16(out, 0);
        detail::wr32(out, crc);
        detail::wr32(out, static_cast<std::uint32_t>(e->data.size()));
        detail::wr32(out, static_cast<std::uint32_t>(e->data.size()));
        detail::wr16(out, static_cast<std::uint16_t>(e->name.size()));
        detail::wr16(out, 0);
        detail::wr16(out, 0);
        detail::wr16(out, 0);
        detail::wr16(out, 0);
        detail::wr32(out, 0);
        detail::wr32(out, off);
        out += e->name;
    }
    const std::uint32_t cd_size = static_cast<std::uint32_t>(out.size()) - cd_start;
    detail::wr32(out, 0x06054b50u);
    detail::wr16(out, 0);
    detail::wr16(out, 0);
    detail::wr16(out, static_cast<std::uint16_t>(entries.size()));
    detail::wr16(out, static_cast<std::uint16_t>(entries.size()));
    detail::wr32(out, cd_size);
    detail::wr32(out, cd_start);
    detail::wr16(out, 0);

    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write archive: " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

}  // namespace moteval
