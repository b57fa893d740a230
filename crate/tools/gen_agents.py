#!/usr/bin/env python3
"""Write crates/core/data/agents.txt: generic role names with their actor
codes, expanded with plural, spelling and rank variants."""
import pathlib

BASE = {
    "GOV": """government administration regime cabinet president vice_president
        prime_minister premier chancellor head_of_state head_of_government king queen
        monarch emir sultan crown_prince prince royal_family governor mayor minister
        official government_official spokesman spokeswoman spokesperson
        government_spokesman presidential_spokesman ambassador envoy diplomat
        consul foreign_minister secretary_of_state state_department foreign_ministry
        ministry authorities junta state_media state_television national_government
        federal_government provincial_government local_government municipality
        city_council governing_council interim_government transitional_government
        presidency palace presidential_palace white_house kremlin administration_official
        civil_servant bureaucrat technocrat cabinet_minister senior_official
        regional_governor district_commissioner district_official provincial_official
        interior_ministry tax_authority customs_service immigration_service
        border_agency ruling_council supreme_leader dictator autocrat strongman
        head_of_mission deputy_ambassador charge_d_affaires embassy consulate""",
    "MIL": """military army navy air_force marines armed_forces troops soldier
        general admiral colonel commander officer military_officer military_official
        defense_official defence_official defense_ministry defence_ministry
        department_of_defense department_of_defence defense_department
        defence_department pentagon_official general_staff chief_of_staff
        joint_chiefs paratrooper special_forces commando infantry artillery_unit
        tank_brigade battalion brigade regiment division garrison coast_guard
        national_guard military_police military_intelligence war_ministry
        ministry_of_war air_defense_unit peacekeeping_troops naval_forces
        ground_forces warship fighter_jet military_spokesman
        army_spokesman sergeant captain lieutenant major private_soldier
        reservist conscript military_council military_commander field_commander""",
    "REB": """rebel rebel_leader rebel_group rebel_forces insurgent insurgency
        guerrilla guerrilla_group militant militant_group armed_group separatist
        separatist_group rebel_commander rebel_fighter fighter jihadist
        extremist terrorist terrorist_group armed_opposition liberation_front
        liberation_army resistance_movement resistance_fighter secessionist
        mutineer rebel_spokesman insurgent_commander militant_leader""",
    "OPP": """opposition opposition_leader opposition_party dissident activist
        protester protestor demonstrator opposition_figure opposition_lawmaker
        opposition_supporter opposition_coalition exile exiled_leader
        pro_democracy_activist rights_activist human_rights_activist
        student_activist political_prisoner critic government_critic""",
    "PTY": """political_party party ruling_party party_leader party_official
        party_member party_chairman party_secretary communist_party
        socialist_party conservative_party liberal_party nationalist_party
        party_spokesman coalition_partner politician candidate
        presidential_candidate campaign party_congress""",
    "LEG": """parliament legislature lawmaker legislator senator congressman
        congresswoman member_of_parliament mp deputy national_assembly
        senate congress house_of_representatives lower_house upper_house
        parliamentary_committee speaker_of_parliament parliamentary_speaker
        legislative_council""",
    "JUD": """court judge judiciary supreme_court constitutional_court prosecutor
        public_prosecutor attorney_general justice_ministry ministry_of_justice
        tribunal magistrate chief_justice high_court appeals_court lawyer
        defense_lawyer defence_lawyer prosecution military_court war_crimes_tribunal""",
    "COP": """police policeman policewoman police_officer police_chief police_force
        riot_police security_forces security_force security_service gendarmerie
        border_guard border_police paramilitary_police interior_ministry_troops
        counterterrorism_police traffic_police patrol constable sheriff
        law_enforcement prison_guard prison_service jailer detective""",
    "SPY": """intelligence_service intelligence_agency spy spy_agency secret_service
        secret_police intelligence_officer intelligence_official intelligence_chief
        counterintelligence intelligence_services informant agent_provocateur
        intelligence_directorate""",
    "IGO": """united_nations un_official un_envoy peacekeeper un_peacekeeper
        international_organization international_organisation security_council
        general_assembly world_bank imf international_monetary_fund
        european_union eu_official african_union nato arab_league
        un_agency un_mission observer_mission international_observer""",
    "NGO": """ngo non_governmental_organization non_governmental_organisation
        charity aid_group aid_agency aid_worker humanitarian_group
        humanitarian_worker relief_agency relief_worker human_rights_group
        rights_group watchdog advocacy_group red_cross red_crescent
        medical_charity civil_society_group foundation""",
    "MED": """journalist reporter newspaper broadcaster television_station
        radio_station news_agency editor correspondent photographer media
        press news_outlet blogger columnist media_outlet""",
    "EDU": """student university school teacher professor academic scholar
        researcher schoolchildren pupil university_student college
        student_union lecturer headmaster""",
    "BUS": """company business businessman businesswoman corporation firm
        executive chief_executive ceo investor bank banker trader
        merchant shopkeeper shop store factory industrialist contractor
        oil_company mining_company multinational employer entrepreneur
        market_vendor""",
    "LAB": """worker workers_union trade_union union labor_union labour_union
        union_leader striker miner factory_worker dock_worker farmworker
        employee labourer laborer union_member""",
    "AGR": """farmer peasant herder pastoralist rancher fisherman
        farmers_union smallholder grower""",
    "CVL": """civilian village villager resident citizen people crowd
        population inhabitant local_resident townspeople community
        neighborhood neighbourhood passerby bystander family families
        child children woman women men youth elderly pedestrian
        shopper commuter motorist passenger homeowner tenant
        shops market household neighbor neighbour survivor mourner""",
    "REF": """refugee displaced_person internally_displaced_person asylum_seeker
        migrant immigrant evacuee returnee refugee_camp displaced_family
        stateless_person""",
    "REL": """cleric imam priest bishop archbishop pope rabbi monk nun
        religious_leader church mosque temple clergy mullah ayatollah
        preacher pastor religious_group worshipper pilgrim""",
    "HLH": """doctor nurse physician hospital health_worker medical_staff
        paramedic health_official health_ministry surgeon medic clinic""",
    "CRM": """criminal gang gang_member cartel drug_cartel drug_trafficker
        smuggler trafficker kidnapper pirate robber thief mafia
        organized_crime organised_crime hitman gunman gunmen bandit
        arms_dealer""",
    "ENV": """environmentalist environmental_group climate_activist
        conservationist green_group""",
    "ELI": """elite tycoon oligarch billionaire aristocrat nobleman
        tribal_leader tribal_elder clan_elder chieftain""",
    "ETH": """ethnic_group ethnic_minority minority tribe clan""",
}

PORTFOLIOS = {
    "defense": "GOVMIL", "defence": "GOVMIL", "war": "GOVMIL",
    "agriculture": "GOVAGR", "fisheries": "GOVAGR", "livestock": "GOVAGR",
    "education": "GOVEDU", "higher_education": "GOVEDU",
    "health": "GOVHLH", "public_health": "GOVHLH",
    "interior": "GOVCOP", "home_affairs": "GOVCOP", "public_security": "GOVCOP",
    "justice": "GOVJUD", "foreign_affairs": "GOVDIP", "external_affairs": "GOVDIP",
    "finance": "GOVBUS", "economy": "GOVBUS", "trade": "GOVBUS", "commerce": "GOVBUS",
    "industry": "GOVBUS", "treasury": "GOVBUS", "energy": "GOVBUS", "oil": "GOVBUS",
    "mines": "GOVBUS", "transport": "GOV", "labor": "GOVLAB", "labour": "GOVLAB",
    "environment": "GOVENV", "information": "GOVMED", "communications": "GOVMED",
    "culture": "GOV", "tourism": "GOV", "housing": "GOV", "water": "GOV",
    "religious_affairs": "GOVREL", "refugees": "GOVREF", "immigration": "GOVREF",
    "intelligence": "GOVSPY", "national_security": "GOVSPY", "planning": "GOV",
    "youth": "GOV", "sports": "GOV", "social_affairs": "GOV",
}

PORTFOLIO_FORMS = [
    "{p}_minister", "minister_of_{p}", "minister_for_{p}", "ministry_of_{p}",
    "{p}_ministry", "department_of_{p}", "{p}_department", "secretary_of_{p}",
    "{p}_secretary", "deputy_{p}_minister", "deputy_minister_of_{p}",
    "{p}_ministry_spokesman", "{p}_official", "{p}_officials",
]

RANK_PREFIXES = {
    "GOV": ["former", "deputy", "acting", "senior", "interim"],
    "MIL": ["senior", "former", "top", "deputy"],
    "REB": ["senior", "former"],
    "LEG": ["former", "senior"],
    "JUD": ["chief", "senior"],
    "COP": ["senior", "chief"],
    "SPY": ["senior", "former"],
    "OPP": ["prominent", "jailed"],
}

IRREGULAR = {
    "man": "men", "woman": "women", "child": "children", "people": None,
    "police": None, "press": None, "media": None, "militaryjunta": None,
    "gunmen": None, "men": None, "women": None, "children": None,
    "families": None, "youth": "youths", "clergy": None, "elderly": None,
    "townspeople": None, "schoolchildren": None, "population": None,
    "criminal": "criminals", "gendarmerie": None, "mp": "mps",
    "passerby": "passersby", "staff": None, "mafia": None,
}


def plural(word):
    last = word.split("_")[-1]
    if last in IRREGULAR:
        p = IRREGULAR[last]
        return None if p is None else word[: -len(last)] + p
    if word.endswith(("s", "x", "sh", "ch")):
        return word + "es" if not word.endswith("s") else None
    if word.endswith("y") and word[-2:-1] not in "aeiou":
        return word[:-1] + "ies"
    if word.endswith("f"):
        return word[:-1] + "ves"
    return word + "s"


SPELLING = [
    ("organization", "organisation"), ("defense", "defence"), ("labor", "labour"),
    ("neighbor", "neighbour"), ("program", "programme"), ("center", "centre"),
    ("protester", "protestor"), ("spokesman", "spokesperson"),
]

entries = {}


def add(pattern, code):
    pattern = pattern.strip("_").replace("__", "_").upper()
    entries.setdefault(pattern, code)


for code, words in BASE.items():
    for w in words.split():
        add(w, code)
        p = plural(w)
        if p:
            add(p, code)
        for pre in RANK_PREFIXES.get(code, []):
            add(f"{pre}_{w}", code)

for portfolio, code in PORTFOLIOS.items():
    for form in PORTFOLIO_FORMS:
        add(form.format(p=portfolio), code)

for pattern, code in list(entries.items()):
    low = pattern.lower()
    for a, b in SPELLING:
        for x, y in ((a, b), (b, a)):
            if x in low:
                add(low.replace(x, y), code)

# listed forms that must win over generated ones
PINNED = [
    ("VILLAGE", "CVL"), ("DEPARTMENT_OF_AGRICULTURE", "GOVAGR"),
    ("DEFENSE_MINISTER", "GOVMIL"), ("REBEL_LEADER", "REB"),
    ("INTELLIGENCE_SERVICE", "SPY"), ("DEPARTMENT_OF_DEFENSE", "MIL"),
    ("DEPARTMENT_OF_DEFENCE", "MIL"), ("PRESIDENT", "GOV"), ("REGIME", "GOV"),
    ("CIVILIAN", "CVL"), ("CIVILIANS", "CVL"), ("HEADQUARTERS_OF_THE_ARMED_FORCES", "MIL"),
    ("MILITARY_HEADQUARTERS", "MIL"), ("DEFENSE_HEADQUARTERS", "MIL"),
]
for pattern, code in PINNED:
    entries[pattern] = code

out = pathlib.Path(__file__).resolve().parent.parent / "crates/core/data/agents.txt"
with out.open("w") as f:
    f.write("# Generic agent names and their actor codes: NAME [~CODE].\n")
    f.write("# Underscores stand for spaces. Codes are a sector, optionally\n")
    f.write("# prefixed by GOV for state bodies of that sector.\n")
    for pattern in sorted(entries):
        f.write(f"{pattern} [~{entries[pattern]}]\n")
print(len(entries))
