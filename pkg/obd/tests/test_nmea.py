"""
Tests for GLL sentence parsing and rendering
"""

import numpy as np
from django.test import SimpleTestCase

from obd.nmea import (
    BadChecksum,
    FixStatus,
    GeoFix,
    MalformedField,
    OutOfRange,
    WrongSentenceType,
    nmea_checksum,
    parse_gll,
    render_gll,
)


class ParseGllTestCase(SimpleTestCase):

    def test_reference_sentence(self):
        fix = parse_gll('$GPGLL,4916.45,N,12311.12,W,225444,A,*1D')
        self.assertAlmostEqual(fix.latitude, 49.27417, places=5)
        self.assertAlmostEqual(fix.longitude, -123.18533, places=5)
        self.assertEqual(fix.utc_time, '225444')
        self.assertIs(fix.status, FixStatus.VALID)
        self.assertTrue(fix.is_valid)

    def test_without_mode_field(self):
        fix = parse_gll('$GPGLL,4916.45,N,12311.12,W,225444,A*31')
        self.assertAlmostEqual(fix.latitude, 49.27417, places=5)

    def test_equator_and_meridian(self):
        fix = parse_gll('$GPGLL,0000.00,N,00000.00,E,000000,A*2A')
        self.assertEqual((fix.latitude, fix.longitude), (0.0, 0.0))

    def test_any_talker(self):
        self.assertAlmostEqual(parse_gll('$GNGLL,4916.45,N,12311.12,W,225444,A*2F').latitude, 49.27417, places=5)

    def test_void_fix(self):
        fix = parse_gll('$GPGLL,4916.45,N,12311.12,W,225444,V*26')
        self.assertIs(fix.status, FixStatus.VOID)
        self.assertFalse(fix.is_valid)
        empty = parse_gll('$GPGLL,,,,,225444,V*07')
        self.assertFalse(empty.is_valid)

    def test_bad_checksum(self):
        with self.assertRaises(BadChecksum):
            parse_gll('$GPGLL,4916.45,N,12311.12,W,225444,A,*1E')

    def test_wrong_sentence(self):
        with self.assertRaises(WrongSentenceType):
            parse_gll('$GPRMC,225444,A,4916.45,N,12311.12,W*2A')

    def test_malformed(self):
        for sentence in ('GPGLL,4916.45,N,12311.12,W,225444,A*31',
                         '$GPGLL,4916.45,N,12311.12,W,225444,A',
                         '$GPGLL,4916.45,X,12311.12,W,225444,A*27'):
            with self.subTest(sentence=sentence):
                with self.assertRaises(MalformedField):
                    parse_gll(sentence)

    def test_latitude_out_of_range(self):
        with self.assertRaises(OutOfRange):
            parse_gll('$GPGLL,9100.00,N,12311.12,W,225444,A*32')


class RenderGllTestCase(SimpleTestCase):

    def test_render_reference_fix(self):
        sentence = render_gll(GeoFix(49.274166666, -123.185333333, '225444'))
        self.assertEqual(sentence, '$GPGLL,4916.4500,N,12311.1200,W,225444,A*31')

    def test_checksum_covers_body(self):
        sentence = render_gll(GeoFix(0.0, 0.0))
        body, transmitted = sentence[1:].split('*')
        self.assertEqual(int(transmitted, 16), nmea_checksum(body))

    def test_random_fixes_round_trip(self):
        rng = np.random.default_rng(183)
        for lat, lon in zip(rng.uniform(-90, 90, 10_000), rng.uniform(-180, 180, 10_000)):
            fix = parse_gll(render_gll(GeoFix(float(lat), float(lon), '120000')))
            self.assertAlmostEqual(fix.latitude, lat, delta=1e-5)
            self.assertAlmostEqual(fix.longitude, lon, delta=1e-5)

    def test_geofix_range(self):
        with self.assertRaises(OutOfRange):
            GeoFix(90.5, 0.0)
        with self.assertRaises(OutOfRange):
            GeoFix(0.0, -180.5)

    def test_void_fix_renders_status(self):
        sentence = render_gll(GeoFix(1.5, 2.5, '010203', FixStatus.VOID))
        self.assertIn(',V*', sentence)
        self.assertIs(parse_gll(sentence).status, FixStatus.VOID)


class CorruptionTestCase(SimpleTestCase):

    def test_every_single_character_change_is_detected(self):
        sentence = '$GPGLL,4916.45,N,12311.12,W,225444,A*31'
        for position in range(1, sentence.index('*')):
            corrupted = sentence[:position] + chr(ord(sentence[position]) ^ 1) + sentence[position + 1:]
            with self.subTest(position=position):
                with self.assertRaises(BadChecksum):
                    parse_gll(corrupted)
