from datetime import date

from clonewatch.heuristics import RegistrationSource
from clonewatch.rdap import parse_rdap_response, parse_whois_text


def test_rdap_events_parsed():
    payload = {
        "events": [
            {"eventAction": "registration", "eventDate": "2017-03-14T09:00:00Z"},
            {"eventAction": "last changed", "eventDate": "2020-01-08T12:30:00Z"},
            {"eventAction": "expiration", "eventDate": "2021-03-14T00:00:00Z"},
        ],
        "entities": [{"vcardArray": ["vcard", [["fn", {}, "text",
                                                "REDACTED FOR PRIVACY"]]]}],
    }
    reg = parse_rdap_response("clone.test", payload)
    assert reg.created == date(2017, 3, 14)
    assert reg.updated == date(2020, 1, 8)
    assert reg.registrant_redacted is True
    assert reg.source is RegistrationSource.RDAP


def test_rdap_inconsistent_update_dropped():
    payload = {
        "events": [
            {"eventAction": "registration", "eventDate": "2020-05-01T00:00:00Z"},
            {"eventAction": "last changed", "eventDate": "2019-01-01T00:00:00Z"},
        ]
    }
    reg = parse_rdap_response("x.test", payload)
    assert reg.created == date(2020, 5, 1)
    assert reg.updated is None


def test_rdap_empty_payload():
    reg = parse_rdap_response("x.test", {})
    assert reg.created is None and reg.updated is None


def test_whois_text_fallback():
    text = """
    Domain Name: CLONE.TEST
    Creation Date: 2017-03-14T09:00:00Z
    Updated Date: 2020-01-08T00:00:00Z
    Registrant: REDACTED FOR PRIVACY
    """
    reg = parse_whois_text("clone.test", text)
    assert reg.created == date(2017, 3, 14)
    assert reg.updated == date(2020, 1, 8)
    assert reg.registrant_redacted is True
    assert reg.source is RegistrationSource.WHOIS_TEXT


def test_whois_text_alternate_formats():
    text = "created: 14-apr-2008\nchanged: 2020.01.07\n"
    reg = parse_whois_text("x.test", text)
    assert reg.created == date(2008, 4, 14)
    assert reg.updated == date(2020, 1, 7)


def test_whois_text_without_dates_is_unavailable():
    reg = parse_whois_text("x.test", "No match for domain")
    assert reg.source is RegistrationSource.UNAVAILABLE
