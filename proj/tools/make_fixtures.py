#!/usr/bin/env python3
"""Regenerate the bundled replay fixtures under fixtures/forum/.

Two small forums link to marketplace shops from usernames and signatures; the shop API
responses cover pagination, unknown categories, malformed entries, a shop that vanishes
between validation and fetching, and a handle whose lookup keeps failing.
"""

import hashlib
import json
import random
import sys
from pathlib import Path

API = "https://shoppy.gg/api/v1"
FORUM_TIME = "2020-06-01T08:00:00Z"
PAGE_SIZE = 10


def body_name(url):
    return hashlib.sha256(url.encode()).hexdigest()[:24] + ".body"


class Store:
    def __init__(self, root):
        self.root = root
        self.entries = {}

    def add(self, url, body, status=200, fetched_at=FORUM_TIME, headers=None):
        entry = {"url": url, "file": body_name(url), "status": status, "fetched_at": fetched_at}
        if headers:
            entry["headers"] = headers
        self.entries[url] = (entry, body)

    def save(self):
        self.root.mkdir(parents=True, exist_ok=True)
        for old in self.root.glob("*.body"):
            old.unlink()
        items = []
        for url in sorted(self.entries):
            entry, body = self.entries[url]
            (self.root / entry["file"]).write_text(body, encoding="utf-8")
            items.append(entry)
        index = {"version": 1, "entries": items}
        (self.root / "index.json").write_text(json.dumps(index, indent=2) + "\n", encoding="utf-8")


# --- forums -----------------------------------------------------------------------

def sig_html(links):
    parts = []
    for link in links:
        if link.startswith("text:"):
            parts.append("<span>Shop: " + link[5:] + "</span>")
        else:
            parts.append('<a href="%s">%s</a>' % (link, link.replace("https://", "")))
    return '<div class="signature">' + " | ".join(parts) + "</div>" if parts else ""


def post_html(user, links, body="Vouch, fast delivery."):
    return (
        '<div class="post">\n'
        '  <div class="author"><a class="username" href="/members/%s">%s</a></div>\n'
        '  <div class="message">%s</div>\n'
        "  %s\n"
        "</div>\n" % (user.replace(" ", "-"), user, body, sig_html(links))
    )


def page(title, inner, links=()):
    nav = "".join('<li><a href="%s">%s</a></li>' % (href, text) for href, text in links)
    return (
        "<!DOCTYPE html>\n<html><head><title>%s</title>"
        "<style>.post { margin: 1em }</style></head>\n<body>\n<ul class=\"nav\">%s</ul>\n%s</body></html>\n"
        % (title, nav, inner)
    )


def shop(handle):
    return "https://shoppy.gg/" + handle


def build_crackden(store):
    base = "https://crackden.example"
    board = base + "/forums/marketplace/"
    store.add(
        board,
        page(
            "Marketplace",
            '<div class="threads">'
            '<a href="/threads/netflix-accounts.101/">Netflix accounts</a>'
            '<a href="/threads/gaming-accounts.102/">Gaming accounts</a>'
            '<a href="/threads/combo-lists.103/">Combo lists</a>'
            "</div>",
            [
                ("/forums/marketplace/page-2/", "Next"),
                ("/forums/marketplace/archive/", "Archive"),
                ("/forums/private/", "Staff"),
                ("/members/NetflixKing", "Top seller"),
                ("https://elsewhere.example/forums/market/", "Partner"),
                ("mailto:admin@crackden.example", "Contact"),
                ("/forums/marketplace/#top", "Top"),
            ],
        ),
    )
    store.add(board + "archive/", "<html><body>Not found</body></html>", status=404)
    store.add(
        board + "page-2/",
        page(
            "Marketplace - page 2",
            '<a href="/threads/carding-methods.104/">Methods</a>'
            '<a href="/threads/vpn-deals.105/">VPN deals</a>',
            [("/forums/marketplace/", "Prev")],
        ),
    )
    back = [("/forums/marketplace/", "Marketplace")]
    store.add(
        base + "/threads/netflix-accounts.101/",
        page(
            "Netflix accounts",
            post_html("NetflixKing", [shop("netflixking"), "https://shoppy.gg/@streamzone"])
            + post_html("streamzone", ["text:shoppy.gg/streamzone", "https://shoppy.gg/product/Xy12AbC"])
            + post_html("random_viewer", [], "Do these come with warranty?"),
            back,
        ),
    )
    store.add(
        base + "/threads/gaming-accounts.102/",
        page(
            "Gaming accounts",
            post_html("og.vault", ["https://www.shoppy.gg/og.vault", shop("minecraftmarket")])
            + post_html("Dark Lord", [shop("skinz-depot")], "Selling rare skins.")
            + post_html("minecraftmarket", []),
            back,
        ),
    )
    # Sloppy markup: upper-case tags, unquoted attributes, a stray end tag, unclosed divs.
    store.add(
        base + "/threads/combo-lists.103/",
        "<HTML><BODY>\n"
        '<DIV CLASS=post><A CLASS=username HREF="/members/combokings">combokings</A>\n'
        "<div class=message>Private HQ combos</span><br>\n"
        '<DIV class="signature"><a href=https://shoppy.gg/combokings>combokings</a> '
        '<a href="https://shoppy.gg/dbleaks">dbleaks</a></DIV></div>\n'
        '<div class="post"><a class="username">lurker99</a>\n'
        '<div class="signature"><a href="https://shoppy.gg/flakyshop">my shop</a></div></div>\n'
        '<div class="post"><a class="username">dbleaks</a><p>All fresh.\n'
        '<div class="signature"><a href="https://shoppy.gg/bad!handle">broken</a></div>\n'
        '<a href="/threads/combo-lists.103/page-2">2</a>\n'
        "</BODY></HTML>\n",
    )
    store.add(
        base + "/threads/combo-lists.103/page-2",
        page(
            "Combo lists - page 2",
            post_html("configlab", [shop("configlab"), shop("ghostshop")], "Configs for every site."),
            back,
        ),
    )
    store.add(
        base + "/threads/carding-methods.104/",
        page(
            "Methods",
            post_html("fullzmaster", [shop("fullzmaster"), shop("cardingclub")])
            + post_html("cardingclub", [shop("cardingclub")])
            + post_html("newbie2020", [], "How do I use this?"),
            back,
        ),
    )
    store.add(
        base + "/threads/vpn-deals.105/",
        page(
            "VPN deals",
            post_html("vpnhub", [shop("vpnhub"), shop("keystore")])
            + post_html("keystore", [])
            + post_html("followerfarm", [shop("followerfarm")]),
            back,
        ),
    )


def build_leakbay(store):
    base = "https://leakbay.example"
    board = base + "/forums/shops/"
    store.add(
        board,
        page(
            "Shops",
            '<a href="/threads/shop-list.201/">Shop list</a> <a href="/threads/streaming-sale.202/">Streaming</a>',
        ),
    )
    back = [("/forums/shops/", "Shops")]
    store.add(
        base + "/threads/shop-list.201/",
        page(
            "Shop list",
            post_html("leakmaster", [shop("netflixking"), shop("dbleaks"), shop("accountbazaar")], "Trusted shops.")
            + post_html("accountbazaar", [shop("accountbazaar"), shop("spotifyshack")])
            + post_html("toolsmith", [shop("toolsmith"), shop("deadlink")]),
            back + [("/threads/shop-list.201/page-2", "Next")],
        ),
    )
    store.add(
        base + "/threads/shop-list.201/page-2",
        page(
            "Shop list - page 2",
            post_html("proxyking", [shop("proxyking"), shop("gamerdepot")])
            + post_html("gamerdepot", [shop("gamerdepot"), shop("socialboost")])
            + post_html("socialboost", [shop("socialboost"), shop("comboworld")])
            + post_html("hbomaxed", [shop("hbomaxed"), shop("rustaccounts")])
            + post_html("cfgcentral", [shop("cfgcentral"), shop("binbank")]),
            back,
        ),
    )
    store.add(
        base + "/threads/streaming-sale.202/",
        page(
            "Streaming",
            post_html("spotifyshack", [shop("spotifyshack"), shop("crunchyhub")])
            + post_html("streamzone", [shop("streamzone")])
            + post_html("guidegod", [shop("guidegod"), shop("methodvault")]),
            back,
        ),
    )


# --- shop listings ----------------------------------------------------------------

THEMES = {
    "streaming": (
        "account",
        ["Netflix", "Spotify", "Hulu", "Disney+", "HBO Max", "Crunchyroll", "Amazon Prime Video", "Paramount+"],
        ["Premium {p} Account", "{p} Premium 1 Month", "{p} UHD 4 Screens Lifetime", "{p} Family Upgrade",
         "{p} 1 Year Warranty", "{p} Private Account Full Access"],
        (0.5, 6.0),
    ),
    "gaming": (
        "account",
        ["Minecraft", "Fortnite", "Valorant", "Steam", "Apex Legends", "Rust", "CSGO Prime", "Roblox"],
        ["{p} Full Access Account", "{p} Rare Skins Account", "{p} OG Account Email Changeable",
         "{p} Ranked Ready Account", "{p} Random Account", "{p} Stacked Level 100"],
        (0.3, 25.0),
    ),
    "combos": (
        "file",
        ["USA", "UK", "Gaming", "Streaming", "Shopping", "Crypto", "Private HQ", "Mixed"],
        ["{p} Combo List {n}M Lines", "{p} Email Pass Combolist Fresh", "{p} Database Leak {n}M Records",
         "{p} UserPass Combo HQ", "{p} Mail Access Combo", "Leaked {p} DB Dump {n} Million"],
        (1.0, 40.0),
    ),
    "configs": (
        "file",
        ["Netflix", "Spotify", "Steam", "Origin", "Uplay", "NordVPN", "Disney+", "Minecraft"],
        ["OpenBullet Config {p} CPM {c}", "{p} Config Full Capture Proxyless", "SilverBullet {p} Config",
         "{p} Checker Config High CPM", "Sentry MBA {p} Config", "{p} Capture Config OpenBullet"],
        (2.0, 15.0),
    ),
    "carding": (
        "account",
        ["USA", "UK", "CA", "EU", "AU", "Premium"],
        ["{p} CC Fullz With SSN DOB", "{p} Bank Logs Verified", "{p} CVV Fresh Bins", "PayPal Logs {p} Balance",
         "{p} Carding Method Cashout", "{p} Fullz Info CC Bins"],
        (5.0, 80.0),
    ),
    "vpn": (
        "account",
        ["NordVPN", "ExpressVPN", "IPVanish", "Windscribe", "CyberGhost", "Surfshark", "Windows 10 Pro", "Office 365"],
        ["{p} Account 1 Year", "{p} Premium Subscription", "{p} License Key Lifetime", "{p} Key Global Activation",
         "{p} 2 Years Warranty"],
        (0.5, 12.0),
    ),
    "social": (
        "service",
        ["Instagram", "TikTok", "YouTube", "Twitter", "Twitch", "Spotify"],
        ["{p} Followers {n}K", "{p} Likes {n}K Instant", "{p} Views {n}K Fast", "{p} Subscribers {n}K Real",
         "{p} Followers Refill Guaranteed"],
        (1.0, 30.0),
    ),
    "guides": (
        "file",
        ["Amazon Refund", "Uber Eats", "Bypass SMS", "Dropshipping", "Cashout", "Crypto"],
        ["{p} Method Guide PDF", "{p} Ebook Tutorial 2020", "{p} Course Full Method", "{p} Guide Working Method",
         "Private {p} Method Updated"],
        (3.0, 50.0),
    ),
}

SHOPS = {
    "netflixking": (["streaming"], 24),
    "streamzone": (["streaming", "vpn"], 18),
    "og.vault": (["gaming"], 22),
    "minecraftmarket": (["gaming"], 12),
    "skinz-depot": (["gaming"], 9),
    "combokings": (["combos"], 20),
    "dbleaks": (["combos"], 16),
    "configlab": (["configs"], 21),
    "ghostshop": (["streaming"], 5),
    "fullzmaster": (["carding"], 14),
    "cardingclub": (["carding", "guides"], 16),
    "vpnhub": (["vpn"], 15),
    "keystore": (["vpn"], 11),
    "followerfarm": (["social"], 13),
    "accountbazaar": (["streaming", "gaming"], 26),
    "spotifyshack": (["streaming"], 10),
    "toolsmith": (["configs", "combos"], 17),
    "crunchyhub": (["streaming"], 8),
    "guidegod": (["guides"], 12),
    "methodvault": (["guides", "carding"], 11),
    "proxyking": (["vpn", "configs"], 9),
    "gamerdepot": (["gaming"], 19),
    "socialboost": (["social"], 15),
    "comboworld": (["combos"], 23),
    "hbomaxed": (["streaming"], 7),
    "rustaccounts": (["gaming"], 6),
    "cfgcentral": (["configs"], 14),
    "binbank": (["carding"], 10),
}

NOT_SHOPS = ["random_viewer", "lurker99", "newbie2020", "leakmaster", "deadlink"]

# Extra entries appended to a shop's listing, exercising the parser and the report.
SPECIAL = {
    "streamzone": [{"title": "Streaming Bundle Mystery Box", "price": 3.5, "type": "bundle"}],
    "combokings": [
        {"title": "Gaming Combo List 12M Lines", "price": "$4.99", "type": "file"},
        {"price": 2.0, "type": "file"},
        {"title": "Crypto Combo Mega Pack", "price": "free", "type": "file"},
        {"title": "Shopping Combo 528M Private", "price": 45, "type": "file"},
    ],
    "followerfarm": [
        {"title": "Read Before Buying - Terms of Service", "price": 999, "type": "service"},
        {"title": "Contact me on Discord for custom orders", "price": 500, "type": "service"},
    ],
    "socialboost": [{"title": "Don't buy", "price": 1000, "type": "service"}],
    "cardingclub": [{"title": "Telegram support channel", "price": 750, "type": "account"}],
    "og.vault": [{"title": "Fortnite OG Renegade Raider Account", "price": 650, "type": "account"}],
    "dbleaks": [{"title": "Collection Database Leak 92.2 Million Records", "price": 120, "type": "file"}],
    "configlab": [{"title": "Netflix Config", "price": -1, "type": "file"}],
    "keystore": [{"title": "Windows 10 Pro Key", "price": 0, "type": "account"}],
}


def listing(rng, handle, themes, count):
    items = []
    seen = set()
    while len(items) < count:
        theme = themes[0] if len(themes) == 1 or rng.random() < 0.7 else rng.choice(themes[1:])
        category, products, templates, (lo, hi) = THEMES[theme]
        title = rng.choice(templates).format(
            p=rng.choice(products), n=rng.choice([5, 10, 25, 50, 100, 250]), c=rng.choice([500, 1200, 3000, 8000])
        )
        if title in seen:
            continue
        seen.add(title)
        price = round(lo * (hi / lo) ** rng.random(), 2)
        items.append({"id": "%s-%03d" % (handle[:4], len(items) + 1), "title": title, "price": price,
                      "type": category, "stock": rng.randint(0, 500)})
    return items + SPECIAL.get(handle, [])


def build_api(store):
    rng = random.Random(20200601)
    for i, (handle, (themes, count)) in enumerate(SHOPS.items()):
        when = "2020-06-02T%02d:%02d:00Z" % (9 + i // 60, i % 60)
        store.add("%s/shops/%s" % (API, handle), json.dumps({"handle": handle, "status": "active"}), fetched_at=when)
        items = listing(rng, handle, themes, count)
        if handle == "ghostshop":
            # Listed when validated, removed before its products were fetched.
            store.add("%s/shops/%s/products?page=1" % (API, handle), '{"error":"not found"}', status=404,
                      fetched_at=when)
            continue
        pages = [items[j:j + PAGE_SIZE] for j in range(0, len(items), PAGE_SIZE)] + [[]]
        for n, chunk in enumerate(pages, start=1):
            store.add("%s/shops/%s/products?page=%d" % (API, handle, n), json.dumps(chunk, indent=1),
                      fetched_at=when, headers={"Content-Type": "application/json"})
    for handle in NOT_SHOPS:
        store.add("%s/shops/%s" % (API, handle), '{"error":"not found"}', status=404, fetched_at="2020-06-02T08:00:00Z")
    store.add("%s/shops/flakyshop" % API, "Service Unavailable", status=503, fetched_at="2020-06-02T08:00:00Z")


def main():
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "fixtures" / "forum"
    store = Store(root)
    build_crackden(store)
    build_leakbay(store)
    build_api(store)
    store.save()
    print("wrote %d responses to %s" % (len(store.entries), root))


if __name__ == "__main__":
    main()
