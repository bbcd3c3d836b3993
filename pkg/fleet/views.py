"""
Fleet read API - JSON views over the sample store
"""
from datetime import timezone

from dateutil import parser as date_parser
from django.http import HttpResponse, JsonResponse
from django.views.decorators.http import require_http_methods

from fleet import services
from fleet.errors import EmptyTrip, NoFixAvailable, UnknownVehicle
from fleet.store import get_sample_store


def parse_time(value):
    """Epoch milliseconds or an ISO-8601 timestamp (naive means UTC) -> epoch ms"""
    if value is None or value == '':
        return None
    if value.lstrip('-').isdigit():
        return int(value)
    try:
        moment = date_parser.isoparse(value)
    except ValueError:
        raise ValueError(f'not epoch milliseconds or ISO-8601: {value!r}') from None
    if moment.tzinfo is None:
        moment = moment.replace(tzinfo=timezone.utc)
    return int(moment.timestamp() * 1000)


def _time_range(request):
    return parse_time(request.GET.get('from')), parse_time(request.GET.get('to'))


def _not_found(e):
    return JsonResponse({'success': False, 'error': str(e)}, status=404)


@require_http_methods(["GET"])
def vehicle_list(request):
    """All vehicles with at least one stored sample"""
    vehicles = get_sample_store().vehicles()
    return JsonResponse({
        'success': True,
        'vehicles': [v.to_dict() for v in vehicles],
    })


@require_http_methods(["GET"])
def vehicle_samples(request, vehicle_id):
    try:
        t0, t1 = _time_range(request)
        samples = services.query_samples(get_sample_store(), vehicle_id, t0, t1)
    except UnknownVehicle as e:
        return _not_found(e)
    except ValueError as e:
        return JsonResponse({'success': False, 'error': str(e)}, status=400)

    return JsonResponse({
        'success': True,
        'vehicle_id': vehicle_id,
        'count': len(samples),
        'samples': [s.to_record() for s in samples],
    })


@require_http_methods(["GET"])
def vehicle_summary(request, vehicle_id):
    try:
        t0, t1 = _time_range(request)
        summary = services.trip_summary(get_sample_store(), vehicle_id, t0, t1)
    except UnknownVehicle as e:
        return _not_found(e)
    except (EmptyTrip, ValueError) as e:
        return JsonResponse({'success': False, 'error': str(e)}, status=400)

    return JsonResponse({'success': True, 'vehicle_id': vehicle_id, 'summary': summary.to_dict()})


@require_http_methods(["GET"])
def vehicle_position(request, vehicle_id):
    """Latest valid GPS fix"""
    try:
        stored = services.latest_position(get_sample_store(), vehicle_id)
    except (UnknownVehicle, NoFixAvailable) as e:
        return _not_found(e)

    fix = stored.sample.fix
    return JsonResponse({
        'success': True,
        'vehicle_id': vehicle_id,
        'position': {
            'lat': fix.latitude,
            'lon': fix.longitude,
            'utc_time': fix.utc_time,
            'seq': stored.seq,
            'timestamp': stored.timestamp,
        },
    })


@require_http_methods(["GET"])
def vehicle_export(request, vehicle_id, fmt):
    try:
        t0, t1 = _time_range(request)
        data = services.export(get_sample_store(), vehicle_id, t0, t1, fmt)
    except UnknownVehicle as e:
        return _not_found(e)
    except ValueError as e:
        return JsonResponse({'success': False, 'error': str(e)}, status=400)

    _, content_type = services.EXPORT_FORMATS[fmt]
    response = HttpResponse(data, content_type=content_type)
    response['Content-Disposition'] = f'attachment; filename="{vehicle_id}.{fmt}"'
    return response
