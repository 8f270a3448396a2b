#!/usr/bin/env python3
"""
Deployment test script for the Multiset Intersection Verifier.
Run this after deployment to verify everything is working.
"""

import requests
import sys
import os
from datetime import datetime

def test_backend_health(api_url):
    """Test backend health endpoint"""
    print(f"🔍 Testing backend health at {api_url}")

    try:
        response = requests.get(f"{api_url}/health", timeout=10)

        if response.status_code == 200:
            data = response.json()
            print("✅ Backend health check passed")
            print(f"   Status: {data.get('status', 'unknown')}")
            for name, value in data.get('budgets', {}).items():
                print(f"   Budget {name}: {value:,}")
            return data.get('status') == 'healthy'
        else:
            print(f"❌ Backend health check failed: {response.status_code}")
            return False

    except Exception as e:
        print(f"❌ Backend health check error: {e}")
        return False

def test_bounds_endpoint(api_url):
    """The sum bound at (3,2,1) is 6"""
    print(f"\n📐 Testing bounds endpoint at {api_url}")

    try:
        response = requests.get(f"{api_url}/bounds", params={"m": 3, "k": 2, "t": 1}, timeout=10)

        if response.status_code == 200:
            rows = {row['formula']: row for row in response.json()}
            value = rows.get('sum', {}).get('value')
            print(f"   Formulas: {', '.join(rows)}")
            print(f"   Sum bound: {value}")
            if value == 6:
                print("✅ Bounds endpoint test passed")
                return True
            print("❌ Unexpected sum bound")
            return False
        else:
            print(f"❌ Bounds endpoint test failed: {response.status_code}")
            return False

    except Exception as e:
        print(f"❌ Bounds endpoint test error: {e}")
        return False

def test_search_endpoint(api_url):
    """Closure search at (4,3,2) finds the single optimal class of size 11"""
    print(f"\n🔎 Testing search endpoint at {api_url}")

    try:
        response = requests.post(
            f"{api_url}/search",
            json={"m": 4, "k": 3, "t": 2, "engine": "closure"},
            timeout=60
        )

        if response.status_code == 200:
            data = response.json()
            print(f"   Optimum: {data.get('optimum')}")
            print(f"   Classes: {len(data.get('classes', []))}")
            print(f"   Verdict: {data.get('verdict', {}).get('status')}")
            print(f"   Elapsed: {data.get('elapsed_ms', 0):.1f} ms")
            if data.get('optimum') == 11 and data.get('verdict', {}).get('status') == 'match':
                print("✅ Search endpoint test passed")
                return True
            print("❌ Unexpected search result")
            return False
        else:
            print(f"❌ Search endpoint test failed: {response.status_code}")
            print(f"   Response: {response.text}")
            return False

    except Exception as e:
        print(f"❌ Search endpoint test error: {e}")
        return False

def main():
    """Main test function"""
    print("🧪 Multiset Intersection Verifier - Deployment Test")
    print("=" * 60)
    print(f"Test started at: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    print("=" * 60)

    # Get API URL from environment or use default
    api_url = os.getenv("API_BASE_URL", "http://localhost:8000")

    if not api_url.startswith(("http://", "https://")):
        api_url = f"http://{api_url}"

    print(f"Testing API at: {api_url}")
    print("=" * 60)

    tests = [
        ("Backend Health", lambda: test_backend_health(api_url)),
        ("Bounds Endpoint", lambda: test_bounds_endpoint(api_url)),
        ("Search Endpoint", lambda: test_search_endpoint(api_url))
    ]

    results = []
    for test_name, test_func in tests:
        try:
            result = test_func()
            results.append((test_name, result))
        except Exception as e:
            print(f"❌ {test_name} test crashed: {e}")
            results.append((test_name, False))

    print("\n" + "=" * 60)
    print("📋 Test Summary:")

    passed = 0
    for test_name, result in results:
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"   {test_name}: {status}")
        if result:
            passed += 1

    print(f"\nOverall: {passed}/{len(results)} tests passed")

    if passed == len(results):
        print("\n🎉 All tests passed! The verifier is answering correctly.")
        return True
    else:
        print("\n⚠️ Some tests failed. Check the service logs and budgets.")
        return False

if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
