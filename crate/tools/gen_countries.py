#!/usr/bin/env python3
"""Write crates/core/data/countries.tsv from the table below.

Columns: alpha3|alpha2|name|demonym|capital|aliases (comma separated).
A term claimed by an earlier row is skipped for later rows.
"""
import pathlib

ROWS = """
AFG|AF|Afghanistan|Afghan|Kabul|
ALB|AL|Albania|Albanian|Tirana|
DZA|DZ|Algeria|Algerian|Algiers|
AND|AD|Andorra|Andorran|Andorra la Vella|
AGO|AO|Angola|Angolan|Luanda|
ATG|AG|Antigua and Barbuda|Antiguan|Saint John's|
ARG|AR|Argentina|Argentine|Buenos Aires|Argentinian
ARM|AM|Armenia|Armenian|Yerevan|
AUS|AU|Australia|Australian|Canberra|
AUT|AT|Austria|Austrian|Vienna|
AZE|AZ|Azerbaijan|Azerbaijani|Baku|Azeri
BHS|BS|Bahamas|Bahamian|Nassau|The Bahamas
BHR|BH|Bahrain|Bahraini|Manama|
BGD|BD|Bangladesh|Bangladeshi|Dhaka|
BRB|BB|Barbados|Barbadian|Bridgetown|
BLR|BY|Belarus|Belarusian|Minsk|
BEL|BE|Belgium|Belgian|Brussels|
BLZ|BZ|Belize|Belizean|Belmopan|
BEN|BJ|Benin|Beninese|Porto-Novo|
BTN|BT|Bhutan|Bhutanese|Thimphu|
BOL|BO|Bolivia|Bolivian|La Paz|Sucre
BIH|BA|Bosnia and Herzegovina|Bosnian|Sarajevo|Bosnia
BWA|BW|Botswana|Motswana|Gaborone|Batswana
BRA|BR|Brazil|Brazilian|Brasilia|Brasília
BRN|BN|Brunei|Bruneian|Bandar Seri Begawan|
BGR|BG|Bulgaria|Bulgarian|Sofia|
BFA|BF|Burkina Faso|Burkinabe|Ouagadougou|
BDI|BI|Burundi|Burundian|Gitega|Bujumbura
CPV|CV|Cape Verde|Cape Verdean|Praia|Cabo Verde
KHM|KH|Cambodia|Cambodian|Phnom Penh|
CMR|CM|Cameroon|Cameroonian|Yaounde|Yaoundé
CAN|CA|Canada|Canadian|Ottawa|
CAF|CF|Central African Republic|Central African|Bangui|
TCD|TD|Chad|Chadian|N'Djamena|
CHL|CL|Chile|Chilean|Santiago|
CHN|CN|China|Chinese|Beijing|People's Republic of China,PRC
COL|CO|Colombia|Colombian|Bogota|Bogotá
COM|KM|Comoros|Comoran|Moroni|
COD|CD|Democratic Republic of the Congo|Congolese|Kinshasa|DR Congo,DRC
COG|CG|Republic of the Congo|Brazzaville Congolese|Brazzaville|Congo-Brazzaville
CRI|CR|Costa Rica|Costa Rican|San Jose|
CIV|CI|Ivory Coast|Ivorian|Yamoussoukro|Cote d'Ivoire,Abidjan
HRV|HR|Croatia|Croatian|Zagreb|
CUB|CU|Cuba|Cuban|Havana|
CYP|CY|Cyprus|Cypriot|Nicosia|
CZE|CZ|Czech Republic|Czech|Prague|Czechia
DNK|DK|Denmark|Danish|Copenhagen|Dane
DJI|DJ|Djibouti|Djiboutian|Djibouti City|
DMA|DM|Dominica|Dominican citizen|Roseau|
DOM|DO|Dominican Republic|Dominican|Santo Domingo|
ECU|EC|Ecuador|Ecuadorian|Quito|
EGY|EG|Egypt|Egyptian|Cairo|
SLV|SV|El Salvador|Salvadoran|San Salvador|
GNQ|GQ|Equatorial Guinea|Equatoguinean|Malabo|
ERI|ER|Eritrea|Eritrean|Asmara|
EST|EE|Estonia|Estonian|Tallinn|
SWZ|SZ|Eswatini|Swazi|Mbabane|Swaziland
ETH|ET|Ethiopia|Ethiopian|Addis Ababa|
FJI|FJ|Fiji|Fijian|Suva|
FIN|FI|Finland|Finnish|Helsinki|Finn
FRA|FR|France|French|Paris|
GAB|GA|Gabon|Gabonese|Libreville|
GMB|GM|Gambia|Gambian|Banjul|The Gambia
GEO|GE|Georgia|Georgian|Tbilisi|
DEU|DE|Germany|German|Berlin|
GHA|GH|Ghana|Ghanaian|Accra|
GRC|GR|Greece|Greek|Athens|
GRD|GD|Grenada|Grenadian|Saint George's|
GTM|GT|Guatemala|Guatemalan|Guatemala City|
GIN|GN|Guinea|Guinean|Conakry|
GNB|GW|Guinea-Bissau|Bissau-Guinean|Bissau|
GUY|GY|Guyana|Guyanese|Georgetown|
HTI|HT|Haiti|Haitian|Port-au-Prince|
HND|HN|Honduras|Honduran|Tegucigalpa|
HUN|HU|Hungary|Hungarian|Budapest|
ISL|IS|Iceland|Icelandic|Reykjavik|Icelander
IND|IN|India|Indian|New Delhi|Delhi,Dehli
IDN|ID|Indonesia|Indonesian|Jakarta|
IRN|IR|Iran|Iranian|Tehran|Islamic Republic of Iran
IRQ|IQ|Iraq|Iraqi|Baghdad|
IRL|IE|Ireland|Irish|Dublin|
ISR|IL|Israel|Israeli|Jerusalem|
ITA|IT|Italy|Italian|Rome|
JAM|JM|Jamaica|Jamaican|Kingston|
JPN|JP|Japan|Japanese|Tokyo|
JOR|JO|Jordan|Jordanian|Amman|
KAZ|KZ|Kazakhstan|Kazakh|Astana|
KEN|KE|Kenya|Kenyan|Nairobi|
KIR|KI|Kiribati|I-Kiribati|Tarawa|
PRK|KP|North Korea|North Korean|Pyongyang|DPRK
KOR|KR|South Korea|South Korean|Seoul|Republic of Korea
XKX|XK|Kosovo|Kosovar|Pristina|
KWT|KW|Kuwait|Kuwaiti|Kuwait City|
KGZ|KG|Kyrgyzstan|Kyrgyz|Bishkek|
LAO|LA|Laos|Laotian|Vientiane|Lao
LVA|LV|Latvia|Latvian|Riga|
LBN|LB|Lebanon|Lebanese|Beirut|
LSO|LS|Lesotho|Basotho|Maseru|
LBR|LR|Liberia|Liberian|Monrovia|
LBY|LY|Libya|Libyan|Tripoli|
LIE|LI|Liechtenstein|Liechtensteiner|Vaduz|
LTU|LT|Lithuania|Lithuanian|Vilnius|
LUX|LU|Luxembourg|Luxembourgish|Luxembourg City|
MDG|MG|Madagascar|Malagasy|Antananarivo|
MWI|MW|Malawi|Malawian|Lilongwe|
MYS|MY|Malaysia|Malaysian|Kuala Lumpur|
MDV|MV|Maldives|Maldivian|Malé|
MLI|ML|Mali|Malian|Bamako|
MLT|MT|Malta|Maltese|Valletta|
MHL|MH|Marshall Islands|Marshallese|Majuro|
MRT|MR|Mauritania|Mauritanian|Nouakchott|
MUS|MU|Mauritius|Mauritian|Port Louis|
MEX|MX|Mexico|Mexican|Mexico City|
FSM|FM|Micronesia|Micronesian|Palikir|
MDA|MD|Moldova|Moldovan|Chisinau|
MCO|MC|Monaco|Monegasque|Monaco City|
MNG|MN|Mongolia|Mongolian|Ulaanbaatar|
MNE|ME|Montenegro|Montenegrin|Podgorica|
MAR|MA|Morocco|Moroccan|Rabat|
MOZ|MZ|Mozambique|Mozambican|Maputo|
MMR|MM|Myanmar|Burmese|Naypyidaw|Burma,Yangon
NAM|NA|Namibia|Namibian|Windhoek|
NRU|NR|Nauru|Nauruan|Yaren|
NPL|NP|Nepal|Nepali|Kathmandu|Nepalese
NLD|NL|Netherlands|Dutch|Amsterdam|Holland,The Hague
NZL|NZ|New Zealand|New Zealander|Wellington|
NIC|NI|Nicaragua|Nicaraguan|Managua|
NER|NE|Niger|Nigerien|Niamey|
NGA|NG|Nigeria|Nigerian|Abuja|
MKD|MK|North Macedonia|Macedonian|Skopje|Macedonia
NOR|NO|Norway|Norwegian|Oslo|
OMN|OM|Oman|Omani|Muscat|
PAK|PK|Pakistan|Pakistani|Islamabad|
PLW|PW|Palau|Palauan|Ngerulmud|
PSE|PS|Palestine|Palestinian|Ramallah|Gaza,West Bank,Palestinian Territories
PAN|PA|Panama|Panamanian|Panama City|
PNG|PG|Papua New Guinea|Papua New Guinean|Port Moresby|
PRY|PY|Paraguay|Paraguayan|Asuncion|
PER|PE|Peru|Peruvian|Lima|
PHL|PH|Philippines|Filipino|Manila|Philippine
POL|PL|Poland|Polish|Warsaw|
PRT|PT|Portugal|Portuguese|Lisbon|
QAT|QA|Qatar|Qatari|Doha|
ROU|RO|Romania|Romanian|Bucharest|
RUS|RU|Russia|Russian|Moscow|Russian Federation,Kremlin
RWA|RW|Rwanda|Rwandan|Kigali|
KNA|KN|Saint Kitts and Nevis|Kittitian|Basseterre|
LCA|LC|Saint Lucia|Saint Lucian|Castries|
VCT|VC|Saint Vincent and the Grenadines|Vincentian|Kingstown|
WSM|WS|Samoa|Samoan|Apia|
SMR|SM|San Marino|Sammarinese|San Marino City|
STP|ST|Sao Tome and Principe|Santomean|Sao Tome|
SAU|SA|Saudi Arabia|Saudi|Riyadh|Saudi Arabian
SEN|SN|Senegal|Senegalese|Dakar|
SRB|RS|Serbia|Serbian|Belgrade|Serb
SYC|SC|Seychelles|Seychellois|Victoria|
SLE|SL|Sierra Leone|Sierra Leonean|Freetown|
SGP|SG|Singapore|Singaporean|Singapore City|
SVK|SK|Slovakia|Slovak|Bratislava|
SVN|SI|Slovenia|Slovenian|Ljubljana|Slovene
SLB|SB|Solomon Islands|Solomon Islander|Honiara|
SOM|SO|Somalia|Somali|Mogadishu|
ZAF|ZA|South Africa|South African|Pretoria|
SSD|SS|South Sudan|South Sudanese|Juba|
ESP|ES|Spain|Spanish|Madrid|Spaniard
LKA|LK|Sri Lanka|Sri Lankan|Colombo|
SDN|SD|Sudan|Sudanese|Khartoum|
SUR|SR|Suriname|Surinamese|Paramaribo|
SWE|SE|Sweden|Swedish|Stockholm|Swede
CHE|CH|Switzerland|Swiss|Bern|
SYR|SY|Syria|Syrian|Damascus|Syrian Arab Republic
TWN|TW|Taiwan|Taiwanese|Taipei|
TJK|TJ|Tajikistan|Tajik|Dushanbe|
TZA|TZ|Tanzania|Tanzanian|Dodoma|
THA|TH|Thailand|Thai|Bangkok|
TLS|TL|East Timor|Timorese|Dili|Timor-Leste
TGO|TG|Togo|Togolese|Lome|
TON|TO|Tonga|Tongan|Nuku'alofa|
TTO|TT|Trinidad and Tobago|Trinidadian|Port of Spain|
TUN|TN|Tunisia|Tunisian|Tunis|
TUR|TR|Turkey|Turkish|Ankara|Turkiye,Türkiye
TKM|TM|Turkmenistan|Turkmen|Ashgabat|
TUV|TV|Tuvalu|Tuvaluan|Funafuti|
UGA|UG|Uganda|Ugandan|Kampala|
UKR|UA|Ukraine|Ukrainian|Kyiv|Kiev
ARE|AE|United Arab Emirates|Emirati|Abu Dhabi|UAE
GBR|GB|United Kingdom|British|London|UK,U.K.,Britain,Great Britain,England,Downing Street
USA|US|United States|American|Washington|United States of America,U.S.,U.S.A.,USA,America,White House
URY|UY|Uruguay|Uruguayan|Montevideo|
UZB|UZ|Uzbekistan|Uzbek|Tashkent|
VUT|VU|Vanuatu|Ni-Vanuatu|Port Vila|
VAT|VA|Vatican City|Vatican|Holy See|
VEN|VE|Venezuela|Venezuelan|Caracas|
VNM|VN|Vietnam|Vietnamese|Hanoi|Viet Nam
YEM|YE|Yemen|Yemeni|Sanaa|Sana'a
ZMB|ZM|Zambia|Zambian|Lusaka|
ZWE|ZW|Zimbabwe|Zimbabwean|Harare|
"""


def fold(t):
    return " ".join("".join(c.lower() if c.isalnum() else " " for c in t).split())


out = pathlib.Path(__file__).resolve().parent.parent / "crates/core/data/countries.tsv"
seen = {}
lines = ["# alpha3\talpha2\tkind\tterm"]
for row in ROWS.strip().splitlines():
    a3, a2, name, demonym, capital, aliases = row.split("|")
    terms = [("name", name), ("demonym", demonym), ("capital", capital)]
    terms += [("alias", a) for a in aliases.split(",") if a]
    for kind, term in terms:
        key = fold(term)
        if key in seen:
            continue
        seen[key] = a3
        lines.append(f"{a3}\t{a2}\t{kind}\t{term}")
out.write_text("\n".join(lines) + "\n")
