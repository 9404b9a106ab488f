#include "cubesum/apcache.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cubesum
{

std::string sha256_hex(const std::string &data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
        throw numeric_failure("sha256 failed");
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

namespace
{

std::string body(const std::map<long, long> &records)
{
    std::ostringstream os;
    for (const auto &[p, a] : records)
        os << p << ',' << a << '\n';
    return os.str();
}

} // namespace

std::string cache_file_name(const std::string &tag)
{
    std::string s = tag;
    for (char &c : s)
        if (c == '/')
            c = '_';
        else if (c == '=')
            c = '-';
    return s + ".ap";
}

void write_cache(const std::string &path, const std::string &tag, const std::map<long, long> &records)
{
    std::string b = body(records);
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp);
        if (!f)
            throw domain_error("cannot write cache file " + tmp);
        f << "# curve " << tag << "; sha256=" << sha256_hex(b) << '\n' << b;
    }
    std::filesystem::rename(tmp, path);
}

CacheLoad read_cache(const std::string &path, const std::string &tag)
{
    CacheLoad out;
    std::ifstream f(path);
    if (!f) {
        out.warnings.push_back(path + ": not found");
        return out;
    }
    std::string line, digest;
    if (!std::getline(f, line)) {
        out.warnings.push_back(path + ": empty");
        return out;
    }
    std::string prefix = "# curve " + tag + "; sha256=";
    if (line.rfind(prefix, 0) != 0) {
        out.warnings.push_back(path + ":1: header does not match " + tag);
        return out;
    }
    digest = line.substr(prefix.size());
    std::map<long, long> recs;
    long lineno = 1, last = 0;
    while (std::getline(f, line)) {
        ++lineno;
        long p = 0, a = 0;
        char comma = 0;
        std::istringstream is(line);
        std::string rest;
        if (!(is >> p >> comma >> a) || comma != ',' || (is >> rest) || p <= last) {
            out.warnings.push_back(path + ":" + std::to_string(lineno) + ": corrupt record skipped");
            continue;
        }
        last = p;
        recs[p] = a;
    }
    if (sha256_hex(body(recs)) != digest) {
        out.warnings.push_back(path + ": checksum mismatch, cache ignored");
        return out;
    }
    out.checksum_ok = true;
    out.records = std::move(recs);
    return out;
}

ApCache::ApCache(std::string dir) : dir_(std::move(dir)) {}

ApCache::Table &ApCache::table(const CurveK &E)
{
    std::string tag = E.tag();
    auto it = tables_.find(tag);
    if (it != tables_.end())
        return it->second;
    Table t;
    if (!dir_.empty()) {
        std::string path = (std::filesystem::path(dir_) / cache_file_name(tag)).string();
        if (std::filesystem::exists(path)) {
            CacheLoad c = read_cache(path, tag);
            for (auto &w : c.warnings)
                warnings_.push_back(w);
            t.records = std::move(c.records);
        }
    }
    return tables_.emplace(tag, std::move(t)).first->second;
}

long ApCache::get(const CurveK &E, long p)
{
    Table &t = table(E);
    auto it = t.records.find(p);
    if (it != t.records.end())
        return it->second;
    long a = ap(E, p);
    t.records[p] = a;
    t.dirty = true;
    return a;
}

void ApCache::flush()
{
    if (dir_.empty())
        return;
    std::filesystem::create_directories(dir_);
    for (auto &[tag, t] : tables_) {
        if (!t.dirty)
            continue;
        write_cache((std::filesystem::path(dir_) / cache_file_name(tag)).string(), tag, t.records);
        t.dirty = false;
    }
}

} // namespace cubesum
