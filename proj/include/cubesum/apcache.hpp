#ifndef CUBESUM_APCACHE_HPP
#define CUBESUM_APCACHE_HPP

#include "cubesum/ellcurve.hpp"

#include <map>
#include <string>
#include <vector>

namespace cubesum
{

// On disk: a header "# curve k=<num>/<den>; sha256=<hex>" followed by
// "p,a_p" lines sorted by p.  The digest covers the record lines.
struct CacheLoad {
    std::map<long, long> records;
    std::vector<std::string> warnings;
    bool checksum_ok = false;
};

std::string cache_file_name(const std::string &tag);
void write_cache(const std::string &path, const std::string &tag, const std::map<long, long> &records);
CacheLoad read_cache(const std::string &path, const std::string &tag);
std::string sha256_hex(const std::string &data);

// a_p values per curve, backed by one file per curve under dir (empty dir:
// memory only).
class ApCache
{
public:
    explicit ApCache(std::string dir = "");

    long get(const CurveK &E, long p);
    void flush();
    const std::vector<std::string> &warnings() const { return warnings_; }

private:
    struct Table {
        std::map<long, long> records;
        bool dirty = false;
    };
    Table &table(const CurveK &E);

    std::string dir_;
    std::map<std::string, Table> tables_;
    std::vector<std::string> warnings_;
};

} // namespace cubesum

#endif
