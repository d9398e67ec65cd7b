import random

import pytest

from landledger import elgamal

TABLE_III_PLAINTEXT = (
    "Seller: Mr. X, Buyer: Mr. Y, Land information: Dag number: 8000, "
    "Khatiayan number: 3000, Area:2000 Shotangsho, Transaction ID: BNX Y2345"
)

# frozen safe-prime groups so tests never pay generation cost
P256 = 108681173373199967727798006828014890187913935969179422758948830763714122787963
A256 = 36275201380445446493461971470651633728919123932947513250594009575782565135640
P1024 = 142917026991165414676994938713091518464892352519208100114755301289964672420425353303312482972350909524009609958110228701276809112460827662684089444322822780889650971181472768234938539797108536558653927998597984791994132333740688213183212736657679831245251552923198937618418947651917527022243456676756456106387
A1024 = 70352909845256129225528645887211162028004776849163160401968066185616471294147599702336871559501100382608436508842148754635539633527800569232546301071026059511873142532248580063576711798935003861207726744497302231672579024817850062555384424587951870561629570807830279256025755085412288260510693292672797362432

# chunk sizes that fit under each modulus (2 * 10^chunk < p - 1)
CHUNK_256 = 60


@pytest.fixture(scope="session")
def params23():
    return elgamal.DomainParams(p=23, alpha=5)


@pytest.fixture(scope="session")
def params256():
    return elgamal.DomainParams(p=P256, alpha=A256)


@pytest.fixture(scope="session")
def params1024():
    return elgamal.DomainParams(p=P1024, alpha=A1024)


@pytest.fixture()
def rng():
    return random.Random(20260823)


@pytest.fixture(scope="session")
def table_iii_plaintext():
    return TABLE_III_PLAINTEXT
