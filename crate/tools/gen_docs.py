"""Document fixtures: the pipeline corpus, geolocation docs, QA recordings and
preprocessing cases. Imported by gen_fixtures.py."""
import datetime
import json
import random

CITIES = ["Kabul", "Damascus", "Aleppo", "Baghdad", "Mosul", "Beirut", "Cairo", "Nairobi",
          "Mogadishu", "Lagos", "Abuja", "Caracas", "Bogota", "Khartoum", "Karachi", "Lahore",
          "Dhaka", "Manila", "Bamako", "Kyiv", "Kharkiv", "Tehran", "Istanbul", "Ankara", "Tunis"]
GROUPS = ["students", "opposition supporters", "farmers", "teachers", "factory workers",
          "government employees", "taxi drivers", "residents", "women's rights activists",
          "university graduates", "shopkeepers", "miners"]
TARGETS = ["the government", "the new tax law", "the ruling party", "the election results",
           "rising fuel prices", "the military council", "police brutality", "the mayor"]
ARMED = ["Islamic State fighters", "Taliban fighters", "Boko Haram militants", "Al-Shabaab militants",
         "unidentified gunmen", "rebel forces", "government troops", "Houthi rebels"]
VICTIMS = ["villagers", "a police checkpoint", "a military convoy", "worshippers at a mosque",
           "a crowded market", "civilians", "an army base", "a refugee camp"]
LEADERS = ["President Obama", "Emmanuel Macron", "Vladimir Putin", "Angela Merkel", "Narendra Modi",
           "Recep Tayyip Erdogan", "Xi Jinping", "Boris Johnson", "Joe Biden", "Benjamin Netanyahu",
           "Mahmoud Abbas", "Ashraf Ghani"]
COUNTRIES = ["Turkey", "Iran", "Egypt", "Kenya", "Nigeria", "Pakistan", "India", "Colombia",
             "Ukraine", "Russia", "France", "Germany", "Japan", "Brazil"]
ORGS = ["Hamas", "Hezbollah", "the Taliban", "the Islamic State", "Amnesty International",
        "the United Nations", "NATO", "the European Union", "Human Rights Watch"]
TOPICS = ["the war in Syria", "trade relations", "the refugee crisis", "climate policy",
          "regional security", "the nuclear programme"]
DAYS = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"]
WHENS = ["last week", "on Monday", "on Friday", "yesterday", "earlier this month", "last month"]

EVENTS = [
    "Thousands of {group} held a demonstration against {target} in {city} on {day}, demanding reforms. "
    "Organizers said the rally was peaceful and police kept a close watch on the crowd.",
    "Angry {group} rioted against {target} in {city} {when}, setting fire to cars and shops. "
    "Local officials said dozens of people were injured in the unrest.",
    "{armed} attacked {victims} near {city} on {day}, killing at least {n} people, officials said. "
    "The attack was the deadliest in the region this year.",
    "{leader} met {leader2} in {city} on {day} to discuss {topic}. "
    "The two leaders held talks for several hours and promised to meet again.",
    "{leader} accused {org} of human rights abuses during a news conference in {city} {when}. "
    "The accusation drew an angry response from officials.",
    "Police arrested {n} {group} in {city} on {day} after clashes outside the parliament building. "
    "A police spokesman said those detained would appear in court.",
    "{country} and {country2} signed an agreement in {city} {when} to expand security cooperation. "
    "Officials from both governments praised the accord as a turning point.",
    "{leader} warned on {day} that {country} would retaliate if {org} continued its attacks near {city}. "
    "The threat came after a week of rising tension along the border.",
    "Aid workers from the Red Cross delivered food aid and medical supplies to {victims} in {city} {when}. "
    "The agency said more help was needed before winter.",
    "The European Union imposed sanctions on {country} {when} over its crackdown on protesters, "
    "diplomats in {city} said. The measures freeze the assets of senior officials.",
    "{country} deployed troops to the border near {city} on {day} amid rising tensions with {country2}. "
    "Military officials said the deployment was defensive.",
    "{armed} agreed to a ceasefire with the army in {city} {when} after weeks of fighting. "
    "Residents said the streets were calm for the first time in days.",
]

DROPS = [
    "Talks continue on Monday.",
    "No comment.",
    "TOP STORIES: Markets rally in Asia. Storm hits coast. Election results delayed in the capital. "
    "Here are the main headlines from across the region this morning.",
    "Shares fell sharply on the stock market as investors weighed quarterly earnings from the largest "
    "banks, and the Dow Jones index closed lower for a third day.",
    "The government will not sign the treaty under any circumstances, the foreign minister told "
    "reporters. It did not send a delegation to the conference either.",
    "A magnitude 6.1 earthquake struck the coast early on Tuesday, triggering a tsunami warning and "
    "flooding in low-lying villages, the national disaster agency said.",
]


def doc(i, date, text, source="fixture"):
    return {"id": f"doc-{i:03d}", "date": date.isoformat(), "source": source, "headline": "", "text": text}


def corpus():
    rng = random.Random(20240607)
    start = datetime.date(2015, 1, 1)
    docs = []
    for i in range(100):
        date = start + datetime.timedelta(days=rng.randrange(0, 9 * 365))
        if i % 17 == 5:
            text = DROPS[(i // 17) % len(DROPS)]
        else:
            tpl = EVENTS[i % len(EVENTS)]
            l1, l2 = rng.sample(LEADERS, 2)
            c1, c2 = rng.sample(COUNTRIES, 2)
            text = tpl.format(
                group=rng.choice(GROUPS), target=rng.choice(TARGETS), city=rng.choice(CITIES),
                day=rng.choice(DAYS), when=rng.choice(WHENS), armed=rng.choice(ARMED),
                victims=rng.choice(VICTIMS), n=rng.randrange(3, 40), leader=l1, leader2=l2,
                topic=rng.choice(TOPICS), org=rng.choice(ORGS), country=c1, country2=c2,
            )
            text = text[0].upper() + text[1:]
            if i % 9 == 0:
                text = f"{rng.choice(CITIES).upper()} (Reuters) - " + text
        docs.append(doc(i, date, text))
    return docs


AYBAK = (
    "A bomb blast hit a religious school in northern Afghanistan on Wednesday, killing at least 10 "
    "students, a Taliban official said.\nThe explosion went off at around the time of afternoon prayers "
    "at the Al Jihad Madrassa in Aybak, capital of Samangan province, a resident of the city who heard "
    "the explosion told The Associated Press."
)

# (text, phrase the QA model returned as the location, or None)
GEO_NO_OVERLAP = [
    ("Police dispersed a crowd outside the parliament in Nairobi on Monday.", "the parliament"),
    ("Gunmen attacked a checkpoint on the main road north of Baghdad, officials said.", "the main road"),
    ("Protesters gathered at the university campus before marching toward Cairo.", "the university campus"),
    ("The talks were held aboard a ship, a spokesman in Paris said.", "a ship"),
    ("Rebels shelled a hospital; doctors in Aleppo said the building was hit twice.", "a hospital"),
    ("Farmers blocked the highway with tractors for a third day near Lahore.", "the highway"),
    ("An explosion tore through a crowded market, residents of Mogadishu said.", "a crowded market"),
    ("Soldiers stormed the camp at dawn, according to a statement from Kabul.", "the camp"),
    ("The minister spoke at the border crossing, then flew back to Ankara.", "the border crossing"),
    ("Dozens were hurt at the stadium during clashes, police in Lagos said.", "the stadium"),
    ("Students occupied the main square, witnesses told reporters in Caracas.", "the main square"),
    ("A drone struck a convoy in the desert, a source in Sanaa said.", "the desert"),
    ("Workers walked out of the factory over unpaid wages, a union leader in Dhaka said.", "the factory"),
    ("Militants seized the oil field overnight, officials in Tripoli said.", "the oil field"),
    ("Troops fired tear gas at the rally, a reporter in Kharkiv said.", "the rally"),
    ("The delegation met in a hotel, officials in Beirut confirmed.", None),
    ("Clashes broke out again, residents of Mosul said on Friday.", None),
    ("Police raided several homes, a spokesman in Karachi said.", None),
    ("A car bomb exploded at the gate of the base, a military source in Idlib said.", "the gate of the base"),
    ("Villagers fled across the river after the attack, aid workers in Goma said.", "the river"),
]


def geo_docs():
    out = []
    for i, (text, phrase) in enumerate(GEO_NO_OVERLAP):
        qa = None
        if phrase is not None:
            s = text.index(phrase)
            qa = {"text": phrase, "start": s, "end": s + len(phrase)}
        out.append({"id": f"geo-{i:02d}", "date": "2022-11-30", "text": text, "qa_location": qa})
    return out


RIOT = "A group of Hindu nationalists rioted against Muslim shops in Dehli last week."
AGOHN = "A group of Hindu nationalists"
MS = "Muslim shops"

RIOT_QA = [
    ("Who engaged in the riot?", AGOHN, 0.433),
    ("Who rioted against someone?", MS, 0.131),
    ("Who was the riot directed against?", MS, 0.179),
    ("Who was the target of the riot?", MS, 0.755),
    ("Where did the riot take place?", "Dehli", 0.939),
    ("When did the riot take place?", "Dehli last week", 0.751),
    (f"Who did {AGOHN} riot against?", MS, 0.131),
    (f"Who was {AGOHN}'s riot against?", MS, 0.103),
    (f"Who was attacked by {AGOHN}?", AGOHN, 0.502),
    (f"Who rioted against {MS}?", AGOHN, 0.502),
    (f"Who attacked {MS}?", "Hindu nationalists", 0.452),
    (f"Who damaged {MS}?", MS, 0.131),
]


def riot_qa():
    out = []
    for q, ans, score in RIOT_QA:
        s = RIOT.index(ans)
        out.append({"context": RIOT, "question": q,
                    "answer": {"answer_text": ans, "char_start": s, "char_end": s + len(ans), "score": score}})
    return out


NEGATION = {
    "id": "neg-1", "date": "2019-03-04",
    "text": "Officials from both countries met in Geneva on Monday to discuss a peace deal. "
            "The government will not sign the treaty, a spokesman said. "
            "Talks are expected to resume next week in Vienna.",
    "removed": "The government will not sign the treaty, a spokesman said.",
}

LONG_FILLER = "The committee reviewed the proposal in detail and heard from many witnesses. "

# each case breaks several rules; `expect` is the first in filter order
MULTI_VIOLATION = [
    {"id": "mv-short-composite", "text": "TOP STORIES: • a • b • c", "expect": "too_short"},
    {"id": "mv-short-numeric", "text": "2019 1234 5678", "expect": "too_short"},
    {"id": "mv-long-numeric", "text": "1234567890 " * 1200, "expect": "too_long"},
    {"id": "mv-long-composite", "text": "TOP STORIES: " + LONG_FILLER * 200, "expect": "too_long"},
    {"id": "mv-numeric-composite",
     "text": "Headlines: 1234567 8901234 5678901 2345678 9012345 6789012 3456789 0123456 7890123 4567890 1234567 8901234",
     "expect": "mostly_numeric"},
    {"id": "mv-composite-financial",
     "text": "NEWS SUMMARY: Shares fell on the stock market as investors sold. Quarterly earnings disappointed "
             "and the Dow Jones closed lower. Rebels attacked a convoy.",
     "expect": "composite"},
    {"id": "mv-financial-crime",
     "text": "Shares of the bank fell on the stock market after investors learned that a robbery suspect "
             "had been charged with burglary and homicide at its headquarters.",
     "expect": "financial"},
    {"id": "mv-crime-disaster",
     "text": "Police said a burglary and a homicide were reported in the town hours after an earthquake "
             "and a landslide cut off the main road.",
     "expect": "crime"},
    {"id": "mv-disaster-only",
     "text": "A powerful earthquake triggered a tsunami along the coast on Tuesday, and a landslide buried "
             "several homes in the hills above the town.",
     "expect": "disaster"},
    {"id": "mv-clean",
     "text": "Thousands of students held a demonstration against the government in the capital on Monday, "
             "demanding reforms and new elections.",
     "expect": "ok"},
]


def write_jsonl(path, rows):
    with path.open("w") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n")


def write_all(fix):
    write_jsonl(fix / "corpus.jsonl", corpus())
    write_jsonl(fix / "geo_docs.jsonl", geo_docs())
    s = AYBAK.index("Aybak")
    (fix / "aybak.json").write_text(json.dumps({
        "id": "aybak", "date": "2022-11-30", "text": AYBAK,
        "qa_location": {"text": "Aybak", "start": s, "end": s + 5},
        "expect_geoname_id": 1147290,
    }, indent=2, ensure_ascii=False) + "\n")
    write_jsonl(fix / "riot_qa.jsonl", riot_qa())
    (fix / "negation.json").write_text(json.dumps(NEGATION, indent=2) + "\n")
    write_jsonl(fix / "multi_violation.jsonl",
                [dict(r, date="2020-01-01") for r in MULTI_VIOLATION])
    (fix / "calibration_scores.txt").write_text("".join(f"{i / 100:.2f}\n" for i in range(1, 101)))
