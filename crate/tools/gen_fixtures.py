#!/usr/bin/env python3
"""Regenerate the test fixtures under crates/core/tests/fixtures.

Deterministic: rerunning produces identical files.
"""
import json
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIX = ROOT / "crates/core/tests/fixtures"


def write_jsonl(name, rows):
    with (FIX / name).open("w") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n")


def office(title, start, end, country):
    o = {"title": title, "country": country}
    if start:
        o["start"] = start
    if end:
        o["end"] = end
    return o


def person(title, summary, country, offices, redirects, intro=""):
    return {
        "title": title,
        "short_summary": summary,
        "redirects": redirects,
        "infobox": {"type": "officeholder", "country": country, "offices": offices},
        "intro_paragraph": intro,
    }


def org(title, summary, kind, country, redirects, intro=""):
    box = {"type": kind}
    if country:
        box["country"] = country
    return {
        "title": title,
        "short_summary": summary,
        "redirects": redirects,
        "infobox": box,
        "intro_paragraph": intro,
    }


def islamic_state_redirects():
    bases = [
        "ISIL", "ISIS", "Daesh", "IS", "Islamic State of Iraq and the Levant",
        "Islamic State of Iraq and Syria", "Islamic State of Iraq and al-Sham",
        "Dawlat al-Islamiyah", "Da'esh",
    ]
    suffixes = [
        "", " group", " militants", " organization", " (militant group)",
        " terrorist group", " caliphate", " fighters", " insurgents", " movement",
        " jihadists", " (terrorist organization)",
    ]
    out = [b + s for b in bases for s in suffixes]
    out += ["Islamic State group", "Islamic State militants", "Islamic State caliphate"]
    return out


def kb_articles():
    us = "United States"
    arts = [
        person("Barack Obama", "44th president of the United States", us, [
            office("President of the United States", "2009-01-20", "2017-01-20", us),
            office("United States Senator from Illinois", "2005-01-03", "2008-11-16", us),
        ], ["Obama", "President Obama", "Barack Hussein Obama", "Barack H. Obama", "Barack Obama II"],
            "Barack Hussein Obama II is an American politician who served as the 44th president of the United States."),
        person("Emmanuel Macron", "President of France since 2017", "France", [
            office("President of France", "2017-05-14", None, "France"),
            office("Minister of the Economy", "2014-08-26", "2016-08-30", "France"),
        ], ["Macron", "President Macron", "Emmanuel Jean-Michel Frédéric Macron"]),
        person("Bashar al-Assad", "President of Syria from 2000 to 2024", "Syria", [
            office("President of Syria", "2000-07-17", "2024-12-08", "Syria"),
        ], ["Assad", "Bashar Assad", "President Assad", "Bashar al-Asad"]),
        person("Vladimir Putin", "President of Russia", "Russia", [
            office("President of Russia", "2012-05-07", None, "Russia"),
            office("Prime Minister of Russia", "2008-05-08", "2012-05-07", "Russia"),
            office("President of Russia", "2000-05-07", "2008-05-07", "Russia"),
        ], ["Putin", "President Putin", "Vladimir Vladimirovich Putin"]),
        person("Angela Merkel", "Chancellor of Germany from 2005 to 2021", "Germany", [
            office("Chancellor of Germany", "2005-11-22", "2021-12-08", "Germany"),
        ], ["Merkel", "Chancellor Merkel"]),
        person("Narendra Modi", "Prime Minister of India since 2014", "India", [
            office("Prime Minister of India", "2014-05-26", None, "India"),
            office("Chief Minister of Gujarat", "2001-10-07", "2014-05-22", "India"),
        ], ["Modi", "Prime Minister Modi", "Narendra Damodardas Modi"]),
        person("Recep Tayyip Erdoğan", "President of Turkey since 2014", "Turkey", [
            office("President of Turkey", "2014-08-28", None, "Turkey"),
            office("Prime Minister of Turkey", "2003-03-14", "2014-08-28", "Turkey"),
        ], ["Erdogan", "Recep Tayyip Erdogan", "President Erdogan"]),
        person("Xi Jinping", "General Secretary of the Chinese Communist Party", "China", [
            office("President of China", "2013-03-14", None, "China"),
        ], ["Xi", "President Xi", "Xi Jin-ping"]),
        person("Boris Johnson", "Prime Minister of the United Kingdom from 2019 to 2022", "United Kingdom", [
            office("Prime Minister of the United Kingdom", "2019-07-24", "2022-09-06", "United Kingdom"),
            office("Mayor of London", "2008-05-04", "2016-05-09", "United Kingdom"),
        ], ["Alexander Boris de Pfeffel Johnson", "BoJo"]),
        person("Joe Biden", "46th president of the United States", us, [
            office("President of the United States", "2021-01-20", "2025-01-20", us),
            office("Vice President of the United States", "2009-01-20", "2017-01-20", us),
        ], ["Biden", "President Biden", "Joseph R. Biden", "Joseph Robinette Biden Jr."]),
        person("Donald Trump", "45th and 47th president of the United States", us, [
            office("President of the United States", "2017-01-20", "2021-01-20", us),
            office("President of the United States", "2025-01-20", None, us),
        ], ["Trump", "President Trump", "Donald J. Trump", "Donald John Trump"]),
        person("Volodymyr Zelenskyy", "President of Ukraine since 2019", "Ukraine", [
            office("President of Ukraine", "2019-05-20", None, "Ukraine"),
        ], ["Zelensky", "Zelenskyy", "Volodymyr Zelensky", "President Zelensky"]),
        person("Benjamin Netanyahu", "Prime Minister of Israel", "Israel", [
            office("Prime Minister of Israel", "2022-12-29", None, "Israel"),
            office("Prime Minister of Israel", "2009-03-31", "2021-06-13", "Israel"),
        ], ["Netanyahu", "Bibi Netanyahu", "Binyamin Netanyahu"]),
        person("Mahmoud Abbas", "President of the State of Palestine", "Palestine", [
            office("President of the Palestinian National Authority", "2005-01-15", None, "Palestine"),
        ], ["Abu Mazen", "President Abbas"]),
        person("Ashraf Ghani", "President of Afghanistan from 2014 to 2021", "Afghanistan", [
            office("President of Afghanistan", "2014-09-29", "2021-08-15", "Afghanistan"),
        ], ["Ghani", "Ashraf Ghani Ahmadzai", "President Ghani"]),
        person("Hamid Karzai", "President of Afghanistan from 2004 to 2014", "Afghanistan", [
            office("President of Afghanistan", "2004-12-07", "2014-09-29", "Afghanistan"),
        ], ["Karzai", "President Karzai"]),
        person("Abu Bakr al-Baghdadi", "Leader of the Islamic State from 2010 to 2019", None, [], ["Baghdadi", "Abu Bakr Baghdadi"],
               "Abu Bakr al-Baghdadi was an Iraqi militant leader who led the Islamic State."),
        person("Ayman al-Zawahiri", "Leader of al-Qaeda from 2011 to 2022", None, [], ["Zawahiri", "Ayman Zawahiri"]),
        org("The Pentagon", "Headquarters building of the United States Department of Defense", "building", us,
            ["Pentagon", "Pentagon building", "The Pentagon building"]),
        org("United States Department of Defense", "Executive department of the United States government", "government agency", us,
            ["Department of Defense", "DoD", "U.S. Department of Defense", "Defense Department"]),
        org("Central Intelligence Agency", "Intelligence service of the United States", "intelligence agency", us,
            ["CIA", "C.I.A.", "The Agency"]),
        org("Federal Bureau of Investigation", "Domestic intelligence and security service of the United States", "law enforcement agency", us,
            ["FBI", "F.B.I.", "Federal Bureau"]),
        org("Mossad", "National intelligence agency of Israel", "intelligence agency", "Israel", ["Israeli intelligence agency", "Mossad agency"]),
        org("Israel Defense Forces", "Military of Israel", "military", "Israel", ["IDF", "Israeli army", "Tzahal"]),
        org("Syrian Arab Army", "Land force of the Syrian military", "military", "Syria", ["Syrian army", "SAA"]),
        org("People's Liberation Army", "Military of China", "military", "China", ["PLA", "Chinese army"]),
        org("Russian Armed Forces", "Military of Russia", "military", "Russia", ["Russian military", "Russian army"]),
        org("Islamic State", "Militant jihadist group", "militant organization", None, islamic_state_redirects(),
            "The Islamic State is a transnational Salafi jihadist militant organization."),
        org("Al-Qaeda", "Militant Islamist organization", "militant organization", None, ["Al Qaeda", "Al-Qaida", "AQ"]),
        org("Hamas", "Palestinian Islamist political and military organization", "political party", "Palestine",
            ["Harakat al-Muqawama al-Islamiya", "Islamic Resistance Movement"]),
        org("Hezbollah", "Lebanese Shia Islamist political party and militant group", "political party", "Lebanon",
            ["Hizbollah", "Hizballah", "Party of God"]),
        org("Taliban", "Islamist militant movement in Afghanistan", "militant organization", "Afghanistan", ["The Taliban", "Taleban"]),
        org("Boko Haram", "Jihadist militant group in Nigeria", "militant organization", "Nigeria",
            ["Jama'atu Ahlis Sunna Lidda'awati wal-Jihad"]),
        org("Al-Shabaab", "Militant group in Somalia", "militant organization", "Somalia", ["al-Shabab", "Harakat al-Shabaab al-Mujahideen"]),
        org("Houthis", "Zaidi Shia movement in Yemen", "militant organization", "Yemen", ["Houthi movement", "Ansar Allah", "Houthi rebels"]),
        org("Kurdistan Workers' Party", "Kurdish militant political organization", "militant organization", "Turkey", ["PKK", "Kurdistan Workers Party"]),
        org("Free Syrian Army", "Syrian opposition armed group", "rebel group", "Syria", ["FSA"]),
        org("Wagner Group", "Russian state-funded private military company", "private military company", "Russia", ["PMC Wagner", "Wagner PMC"]),
        org("United Nations", "Intergovernmental organization", "intergovernmental organization", None, ["UN", "U.N.", "The United Nations"]),
        org("NATO", "Intergovernmental military alliance", "military alliance", None, ["North Atlantic Treaty Organization", "Atlantic Alliance"]),
        org("European Union", "Political and economic union of European states", "intergovernmental organization", None, ["EU", "E.U."]),
        org("African Union", "Continental union of African states", "intergovernmental organization", None, ["AU"]),
        org("International Committee of the Red Cross", "Humanitarian organization", "non-governmental organization", "Switzerland", ["ICRC", "Red Cross"]),
        org("Amnesty International", "Human rights non-governmental organization", "non-governmental organization", "United Kingdom", ["Amnesty"]),
        org("Human Rights Watch", "International human rights organization", "non-governmental organization", us, ["HRW"]),
        org("Reuters", "International news agency", "news agency", "United Kingdom", ["Reuters news agency", "Thomson Reuters news"]),
        org("Bharatiya Janata Party", "Political party in India", "political party", "India", ["BJP", "Bharatiya Janata"]),
        org("Muslim Brotherhood", "Transnational Sunni Islamist organization", "political organization", "Egypt", ["Ikhwan", "Society of the Muslim Brothers"]),
        org("Kremlin", "Fortified complex in Moscow and seat of the Russian government", "building", "Russia", ["The Kremlin", "Moscow Kremlin"]),
        org("White House", "Official residence of the president of the United States", "building", us, ["The White House", "Executive Mansion"]),
    ]
    # a few redirects delivered as separate records, as in a raw dump
    extra = [
        {"title": "Barry Obama", "page_kind": "redirect", "redirect_to": "Barack Obama"},
        {"title": "Pentagon (building)", "page_kind": "redirect", "redirect_to": "The Pentagon"},
        {"title": "So-called Islamic State", "page_kind": "redirect", "redirect_to": "Islamic State"},
        {"title": "Paris (disambiguation)", "page_kind": "disambiguation"},
    ]
    # every name must be unique across the index
    seen = {}
    for a in arts:
        for n in [a["title"]] + a["redirects"]:
            key = " ".join(n.lower().replace("_", " ").split())
            assert key not in seen, (n, seen.get(key), a["title"])
            seen[key] = a["title"]
    assert len(arts) == 50, len(arts)
    return arts + extra


MISSPELLINGS = [
    ("Barak Obama", "Barack Obama"), ("Emmanuel Macrn", "Emmanuel Macron"),
    ("Bashar al-Asssad", "Bashar al-Assad"), ("Vladimir Putn", "Vladimir Putin"),
    ("Angela Merkl", "Angela Merkel"), ("Narendra Mody", "Narendra Modi"),
    ("Recep Tayip Erdoğan", "Recep Tayyip Erdoğan"), ("Boris Jonson", "Boris Johnson"),
    ("Joe Bidden", "Joe Biden"), ("Donald Trumpp", "Donald Trump"),
    ("Volodymyr Zelenskyi", "Volodymyr Zelenskyy"), ("Benjamin Netanyahou", "Benjamin Netanyahu"),
    ("Mahmoud Abas", "Mahmoud Abbas"), ("Ashraf Ghanni", "Ashraf Ghani"),
    ("Hamid Karsai", "Hamid Karzai"), ("The Pentagn", "The Pentagon"),
    ("Central Inteligence Agency", "Central Intelligence Agency"),
    ("Federal Bureau of Investigaton", "Federal Bureau of Investigation"),
    ("Israel Defence Forces", "Israel Defense Forces"), ("Syrian Arab Armi", "Syrian Arab Army"),
    ("Islamic Stat", "Islamic State"), ("Hezbolah", "Hezbollah"), ("Talibn", "Taliban"),
    ("Boko Harm", "Boko Haram"), ("Kurdistan Wokers' Party", "Kurdistan Workers' Party"),
    ("Free Syria Army", "Free Syrian Army"), ("Wagnr Group", "Wagner Group"),
    ("Unted Nations", "United Nations"), ("Amnesty Internationl", "Amnesty International"),
    ("Bharatiya Janta Party", "Bharatiya Janata Party"),
]


def lev(a, b):
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def gaz_row(gid, name, alts, lat, lon, fclass, fcode, cc, admin1, pop):
    cols = [str(gid), name, name, ",".join(alts), f"{lat:.5f}", f"{lon:.5f}", fclass, fcode, cc, "",
            admin1, "", "", "", str(pop), "", "0", "", "2024-01-01"]
    assert len(cols) == 19
    return "\t".join(cols)


GAZ = [
    (1147290, "Aybak", ["Aibak", "Haibak", "Samangan City"], 36.26468, 68.01551, "P", "PPLA", "AF", "Samangan", 49000),
    (745044, "Aybak", [], 38.01000, 32.44000, "P", "PPL", "TR", "Konya", 800),
    (1528001, "Aybak", [], 41.30000, 72.90000, "P", "PPL", "KG", "Jalal-Abad", 300),
    (1149361, "Afghanistan", ["Islamic Emirate of Afghanistan", "Afghanestan"], 33.0, 66.0, "A", "PCLI", "AF", "", 37172386),
    (1127766, "Samangan Province", ["Samangan", "Velayat-e Samangan"], 36.0, 67.75, "A", "ADM1", "AF", "Samangan", 387928),
    (1138958, "Kabul", ["Kabol", "Cabool"], 34.52813, 69.17233, "P", "PPLC", "AF", "Kabul", 4434550),
    (1133616, "Mazar-i-Sharif", ["Mazar-e Sharif", "Mazari Sharif"], 36.70904, 67.11087, "P", "PPLA", "AF", "Balkh", 693000),
    (1138336, "Kandahar", ["Qandahar"], 31.61332, 65.71013, "P", "PPLA", "AF", "Kandahar", 614254),
    (1139715, "Jalalabad", [], 34.42647, 70.45153, "P", "PPLA", "AF", "Nangarhar", 356274),
    (2988507, "Paris", ["Paname", "Lutetia"], 48.85341, 2.3488, "P", "PPLC", "FR", "Ile-de-France", 2138551),
    (4717560, "Paris", [], 33.66094, -95.55551, "P", "PPLA2", "US", "TX", 24782),
    (6942553, "Paris", [], 43.2, -80.38333, "P", "PPL", "CA", "Ontario", 12310),
    (3017382, "France", ["French Republic"], 46.0, 2.0, "A", "PCLI", "FR", "", 66987244),
    (1273294, "Delhi", ["Dehli", "Dilli"], 28.65195, 77.23149, "P", "PPLA", "IN", "Delhi", 11034555),
    (1261481, "New Delhi", ["Nai Dilli"], 28.63576, 77.22445, "P", "PPLC", "IN", "Delhi", 317797),
    (1269750, "India", ["Republic of India", "Bharat"], 22.0, 79.0, "A", "PCLI", "IN", "", 1352617328),
    (1275339, "Mumbai", ["Bombay"], 19.07283, 72.88261, "P", "PPLA", "IN", "Maharashtra", 12691836),
    (170654, "Damascus", ["Dimashq", "Ash Sham"], 33.5102, 36.29128, "P", "PPLC", "SY", "Dimashq", 1569394),
    (170063, "Aleppo", ["Halab", "Alep"], 36.20124, 37.16117, "P", "PPLA", "SY", "Aleppo", 1602264),
    (163843, "Idlib", ["Idleb"], 35.93062, 36.63393, "P", "PPLA", "SY", "Idlib", 128840),
    (169577, "Homs", ["Hims"], 34.72682, 36.72339, "P", "PPLA", "SY", "Homs", 775404),
    (163806, "Raqqa", ["Ar Raqqah", "Rakka"], 35.95283, 39.00788, "P", "PPLA", "SY", "Ar Raqqah", 177636),
    (163843 + 1, "Syria", ["Syrian Arab Republic"], 35.0, 38.0, "A", "PCLI", "SY", "", 16906283),
    (4140963, "Washington", ["Washington D.C.", "Washington DC", "District of Columbia"], 38.89511, -77.03637, "P", "PPLC", "US", "DC", 689545),
    (5815135, "Washington", ["State of Washington"], 47.50012, -120.50147, "A", "ADM1", "US", "WA", 7170351),
    (6252001, "United States", ["United States of America", "USA", "America"], 39.76, -98.5, "A", "PCLI", "US", "", 327167434),
    (524901, "Moscow", ["Moskva"], 55.75222, 37.61556, "P", "PPLC", "RU", "Moscow", 10381222),
    (5601538, "Moscow", [], 46.73239, -117.00017, "P", "PPLA2", "US", "ID", 25435),
    (2017370, "Russia", ["Russian Federation"], 60.0, 100.0, "A", "PCLI", "RU", "", 144478050),
    (703448, "Kyiv", ["Kiev", "Kyyiv"], 50.45466, 30.5238, "P", "PPLC", "UA", "Kyiv City", 2797553),
    (706483, "Kharkiv", ["Kharkov"], 49.98081, 36.25272, "P", "PPLA", "UA", "Kharkiv", 1430885),
    (709717, "Donetsk", [], 48.023, 37.80224, "P", "PPLA", "UA", "Donetsk", 1024700),
    (701822, "Mariupol", [], 47.09514, 37.54131, "P", "PPL", "UA", "Donetsk", 481626),
    (690791, "Ukraine", [], 49.0, 32.0, "A", "PCLI", "UA", "", 44622516),
    (98182, "Baghdad", [], 33.34058, 44.40088, "P", "PPLC", "IQ", "Baghdad", 7216000),
    (99072, "Mosul", ["Al Mawsil"], 36.335, 43.11889, "P", "PPLA", "IQ", "Nineveh", 1739800),
    (99237, "Iraq", ["Republic of Iraq"], 33.0, 44.0, "A", "PCLI", "IQ", "", 38433600),
    (276781, "Beirut", ["Bayrut"], 33.89332, 35.50157, "P", "PPLC", "LB", "Beyrouth", 1916100),
    (360630, "Cairo", ["Al Qahirah"], 30.06263, 31.24967, "P", "PPLC", "EG", "Cairo", 7734614),
    (2210247, "Tripoli", ["Tarabulus"], 32.88743, 13.18733, "P", "PPLC", "LY", "Tripoli", 1150989),
    (266826, "Tripoli", ["Trablous"], 34.43667, 35.84972, "P", "PPLA", "LB", "North", 229398),
    (281184, "Jerusalem", ["Al Quds"], 31.76904, 35.21633, "P", "PPLC", "IL", "Jerusalem", 801000),
    (281133, "Gaza", ["Gaza City"], 31.50161, 34.46672, "P", "PPL", "PS", "Gaza Strip", 410000),
    (112931, "Tehran", ["Teheran"], 35.69439, 51.42151, "P", "PPLC", "IR", "Tehran", 7153309),
    (745042, "Istanbul", ["Constantinople"], 41.01384, 28.94966, "P", "PPLA", "TR", "Istanbul", 14804116),
    (323786, "Ankara", [], 39.91987, 32.85427, "P", "PPLC", "TR", "Ankara", 3517182),
    (2643743, "London", ["Londres"], 51.50853, -0.12574, "P", "PPLC", "GB", "England", 8961989),
    (6058560, "London", [], 42.98339, -81.23304, "P", "PPL", "CA", "Ontario", 346765),
    (2950159, "Berlin", [], 52.52437, 13.41053, "P", "PPLC", "DE", "Berlin", 3426354),
    (184745, "Nairobi", [], -1.28333, 36.81667, "P", "PPLC", "KE", "Nairobi Area", 2750547),
    (53654, "Mogadishu", ["Muqdisho"], 2.03711, 45.34375, "P", "PPLC", "SO", "Banaadir", 2587183),
    (2332459, "Lagos", [], 6.45407, 3.39467, "P", "PPLA", "NG", "Lagos", 9000000),
    (2352778, "Abuja", [], 9.05785, 7.49508, "P", "PPLC", "NG", "FCT", 590400),
    (2331447, "Maiduguri", [], 11.84692, 13.15712, "P", "PPLA", "NG", "Borno", 1112449),
    (3646738, "Caracas", [], 10.48801, -66.87919, "P", "PPLC", "VE", "Capital", 3000000),
    (3688689, "Bogota", ["Bogotá"], 4.60971, -74.08175, "P", "PPLC", "CO", "Bogota D.C.", 7674366),
    (379252, "Khartoum", [], 15.55177, 32.53241, "P", "PPLC", "SD", "Khartoum", 1974647),
    (71137, "Sanaa", ["Sana'a"], 15.35472, 44.20667, "P", "PPLC", "YE", "Amanat al Asimah", 1937451),
    (415189, "Aden", [], 12.77944, 45.03667, "P", "PPLA", "YE", "Aden", 550602),
    (1174872, "Karachi", [], 24.8608, 67.0104, "P", "PPLA", "PK", "Sindh", 11624219),
    (1172451, "Lahore", [], 31.558, 74.35071, "P", "PPLA", "PK", "Punjab", 6310888),
    (1176615, "Islamabad", [], 33.72148, 73.04329, "P", "PPLC", "PK", "Islamabad", 601600),
    (1185241, "Dhaka", ["Dacca"], 23.7104, 90.40744, "P", "PPLC", "BD", "Dhaka", 10356500),
    (1298824, "Yangon", ["Rangoon"], 16.80528, 96.15611, "P", "PPLA", "MM", "Yangon", 4477638),
    (1701668, "Manila", [], 14.6042, 120.9822, "P", "PPLC", "PH", "Metro Manila", 1600000),
    (2460596, "Bamako", [], 12.65, -8.0, "P", "PPLC", "ML", "Bamako", 1297281),
    (217831, "Goma", [], -1.67409, 29.22845, "P", "PPLA", "CD", "North Kivu", 670000),
    (1850147, "Tokyo", [], 35.6895, 139.69171, "P", "PPLC", "JP", "Tokyo", 8336599),
    (1816670, "Beijing", ["Peking"], 39.9075, 116.39723, "P", "PPLC", "CN", "Beijing", 18960744),
    (1835848, "Seoul", [], 37.566, 126.9784, "P", "PPLC", "KR", "Seoul", 10349312),
    (3530597, "Mexico City", ["Ciudad de Mexico"], 19.42847, -99.12766, "P", "PPLC", "MX", "Mexico City", 12294193),
    (3435910, "Buenos Aires", [], -34.61315, -58.37723, "P", "PPLC", "AR", "Buenos Aires F.D.", 13076300),
    (2538475, "Rabat", [], 34.01325, -6.83255, "P", "PPLC", "MA", "Rabat-Sale-Kenitra", 1655753),
    (2464470, "Tunis", [], 36.81897, 10.16579, "P", "PPLC", "TN", "Tunis", 693210),
    (2507480, "Algiers", ["Alger"], 36.7525, 3.04197, "P", "PPLC", "DZ", "Alger", 1977663),
    (344979, "Addis Ababa", ["Addis Abeba"], 9.02497, 38.74689, "P", "PPLC", "ET", "Addis Ababa", 2757729),
    (2643123, "Manchester", [], 53.48095, -2.23743, "P", "PPL", "GB", "England", 395515),
    (5128581, "New York City", ["New York", "NYC"], 40.71427, -74.00597, "P", "PPL", "US", "NY", 8804190),
    (1150275, "Al Jihad Madrassa", [], 36.2648, 68.0160, "S", "SCH", "AF", "Samangan", 0),
]


def gazetteer_tsv():
    ids = [g[0] for g in GAZ]
    assert len(ids) == len(set(ids))
    rows = ["# geonameid\tname\tasciiname\talternatenames\tlatitude\tlongitude\tfeature class\tfeature code\t"
            "country code\tcc2\tadmin1 code\tadmin2\tadmin3\tadmin4\tpopulation\televation\tdem\ttimezone\tmodified"]
    rows += [gaz_row(*g) for g in GAZ]
    return "\n".join(rows) + "\n"


def main():
    FIX.mkdir(parents=True, exist_ok=True)
    write_jsonl("kb.jsonl", kb_articles())
    for wrong, right in MISSPELLINGS:
        assert lev(wrong, right) == 1, (wrong, right, lev(wrong, right))
    assert len(MISSPELLINGS) == 30
    (FIX / "misspellings.tsv").write_text(
        "# query\texpected title\n" + "".join(f"{w}\t{r}\n" for w, r in MISSPELLINGS))
    (FIX / "gazetteer.tsv").write_text(gazetteer_tsv())
    import gen_docs
    gen_docs.write_all(FIX)


if __name__ == "__main__":
    main()
