#pragma once

// Data compiled into the library so the pipeline runs without external files.
// Every table can be overridden from the CLI (--suffixes, --geoip).

#include <array>
#include <string_view>

namespace dgad::bundled {

inline constexpr std::string_view suffix_list_version = "dgad-psl-subset-2019.06";

// Subset of the public suffix list: generic TLDs, the ccTLDs seen most often
// in resolver traffic and their common second-level registries.
inline constexpr std::string_view suffix_list = R"(// dgad bundled public suffix subset
// version: dgad-psl-subset-2019.06
// one suffix per line; wildcard (*) and exception (!) rules are not supported

// generic
com
net
org
info
biz
edu
gov
mil
int
name
pro
mobi
asia
tel
travel
jobs
xxx
io
co
me
tv
cc
ws
app
dev
online
site
xyz
top
club
shop
store
tech
space
website
live
life
world
today
news
blog
cloud
link
click
party
study
cricket
gdn
win
bid
loan
men
date
racing
review
download
stream
trade
science
work
agency
email
host
press
services
solutions

// country codes
ac
ae
ag
ai
am
ar
com.ar
at
co.at
au
com.au
net.au
org.au
edu.au
az
ba
be
bg
br
com.br
net.br
org.br
by
bz
ca
cf
ch
cl
cn
com.cn
net.cn
org.cn
gov.cn
cz
de
dk
ee
eg
es
com.es
eu
fi
fr
ga
ge
gq
gr
hk
com.hk
hr
hu
id
co.id
ie
il
co.il
in
co.in
ir
is
it
jp
co.jp
ne.jp
or.jp
ac.jp
kr
co.kr
kz
la
lt
lu
lv
ly
ma
md
ml
mx
com.mx
my
com.my
ng
nl
no
nu
nz
co.nz
pe
ph
pk
pl
com.pl
pt
pw
ro
rs
ru
com.ru
sa
se
sc
sg
com.sg
si
sk
su
th
tk
tr
com.tr
tw
com.tw
ua
com.ua
uk
co.uk
org.uk
ac.uk
gov.uk
me.uk
us
uz
vc
ve
vn
com.vn
za
co.za
)";

// Synthetic IP metadata used by the data generator and as the default
// offline provider. Prefixes are fictitious allocations: they only have to
// be stable, not geographically true.
inline constexpr std::string_view geoip_csv = R"(prefix,country,asn
13.32.0.0/15,US,16509
23.32.0.0/11,US,20940
104.16.0.0/13,US,13335
151.101.0.0/16,US,54113
172.217.0.0/16,US,15169
2606:4700::/32,US,13335
2a00:1450::/32,IE,15169
52.208.0.0/13,IE,16509
185.60.216.0/22,IE,32934
46.4.0.0/16,DE,24940
78.46.0.0/15,DE,24940
2a01:4f8::/32,DE,24940
51.15.0.0/16,FR,12876
62.210.0.0/16,FR,12876
149.202.0.0/16,FR,16276
31.13.64.0/18,NL,32934
37.48.64.0/18,NL,60781
185.107.56.0/22,NL,43350
81.2.64.0/18,GB,20712
178.62.0.0/16,GB,14061
133.242.0.0/16,JP,9370
202.232.0.0/16,JP,2497
5.255.0.0/16,RU,13238
95.213.128.0/17,RU,49505
185.22.152.0/22,RU,50673
91.218.112.0/22,UA,42331
176.114.0.0/20,UA,42331
61.160.0.0/16,CN,4134
122.10.0.0/17,CN,4837
103.224.182.0/23,HK,9381
45.32.0.0/16,SG,20473
185.234.216.0/22,SC,204957
195.123.208.0/20,LV,50979
5.8.0.0/19,BZ,49453
179.43.128.0/18,CH,51852
)";

// Pieces for benign names. Compositions of two or three of these pass the
// benign heuristics for every bundled TLD of length <= 3.
inline constexpr auto wordlist = std::to_array<std::string_view>({
    "account", "active", "adventure", "agency", "airline", "alpha", "amazing", "analytics",
    "apple", "archive", "arena", "atlas", "audio", "auto", "badge", "bakery",
    "bank", "beach", "bright", "budget", "build", "business", "camera", "campus",
    "capital", "career", "castle", "center", "central", "chicken", "city", "classic",
    "cloud", "coffee", "college", "comfort", "connect", "content", "corner", "country",
    "craft", "credit", "crystal", "culture", "daily", "data", "design", "digital",
    "direct", "discount", "dream", "drive", "eagle", "east", "easy", "electric",
    "energy", "engine", "event", "express", "factory", "family", "farm", "fashion",
    "fitness", "flower", "forest", "forum", "fresh", "friend", "future", "galaxy",
    "game", "garden", "global", "gold", "green", "group", "guide", "harbor",
    "health", "home", "hotel", "house", "image", "insight", "island", "journal",
    "kitchen", "lake", "land", "learning", "legal", "light", "line", "local",
    "market", "media", "metro", "mobile", "money", "motor", "mountain", "music",
    "nation", "nature", "network", "north", "ocean", "office", "online", "orange",
    "partner", "people", "photo", "planet", "point", "portal", "power", "premium",
    "press", "prime", "product", "project", "quality", "radio", "reader", "river",
    "rocket", "royal", "school", "science", "secure", "service", "shop", "silver",
    "smart", "social", "solar", "sound", "south", "sport", "star", "station",
    "store", "studio", "summit", "sunny", "system", "talent", "team", "tech",
    "travel", "trust", "union", "valley", "vision", "water", "west", "world",
});

}  // namespace dgad::bundled
