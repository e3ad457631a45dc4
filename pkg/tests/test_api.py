import unittest # Import Python's built-in unittest framework for testing
from application import create_app # Import Flask app factory function to create app instances for testing
from flask import abort # Import abort to raise an HTTP error from a throwaway route


# Set up test case with app instance, test client, and application context for the REST API
class ApiTestCase(unittest.TestCase):
    def setUp(self):
        self.app = create_app('application.config.TestingConfig')
        self.client = self.app.test_client()
        self.app_context = self.app.app_context()
        self.app_context.push()

    # Remove the application context after each test
    def tearDown(self):
        self.app_context.pop()

    # Helper method to list the (d1, d2) pairs of a dumped region
    def pairs(self, region):
        return [[v["d1"], v["d2"]] for v in region["vertices"]]

    # Test fetching a BC region with query parameters and assert 200 OK response
    def test_get_region(self):
        response = self.client.get("/api/regions/?channel=bc&antennas=4,2,3&alpha=0.9,0.6")
        self.assertEqual(response.status_code, 200)
        data = response.get_json()
        self.assertEqual(data["regime"], "BC_PhiNonPos")
        self.assertEqual(data["verdict"]["optimal"], "Yes")
        self.assertIn([0.6, 3.0], self.pairs(data["verdict"]["achievable"]))

    # Test posting an IC configuration and checking every vertex
    def test_post_region(self):
        data = {"channel": "ic", "antennas": [4, 3, 2, 3], "alpha": [0.5, 0.5]}
        response = self.client.post("/api/regions/", json=data)
        self.assertEqual(response.status_code, 200)
        vertices = self.pairs(response.get_json()["verdict"]["achievable"])
        self.assertEqual(vertices, [[0.0, 0.0], [2.0, 0.0], [2.0, 0.5], [1.0, 2.0], [0.0, 3.0]])

    # Test that an alpha outside [0, 1] fails schema validation
    def test_post_region_invalid_alpha(self):
        data = {"channel": "bc", "antennas": [4, 2, 3], "alpha": [1.5, 0.0]}
        response = self.client.post("/api/regions/", json=data)
        self.assertEqual(response.status_code, 400)
        self.assertIn("alpha", response.get_json()["details"])

    # Test that missing fields and zero antennas are rejected with 400 Bad Request
    def test_post_region_invalid_config(self):
        response = self.client.post("/api/regions/", json={"antennas": [4, 2, 3], "alpha": [0.5, 0.5]})
        self.assertEqual(response.status_code, 400)
        self.assertIn("channel", response.get_json()["details"])
        response = self.client.post("/api/regions/", json={"channel": "bc", "antennas": [0, 2, 3], "alpha": [0.5, 0.5]})
        self.assertEqual(response.status_code, 400)

    # Test the reference regions of a BC and an IC
    def test_reference_regions(self):
        response = self.client.get("/api/regions/reference?channel=bc&antennas=4,2,3")
        self.assertEqual(response.status_code, 200)
        data = response.get_json()
        self.assertEqual(self.pairs(data["perfect_csit"]), [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [1.0, 3.0], [0.0, 3.0]])
        self.assertEqual(self.pairs(data["no_csit"]), [[0.0, 0.0], [2.0, 0.0], [0.0, 3.0]])
        response = self.client.get("/api/regions/reference?channel=ic&antennas=4,3,2,3")
        self.assertEqual(response.status_code, 200)
        self.assertIsNone(response.get_json()["perfect_csit"])

    # Test the recommended BC allocation and its sum DoF
    def test_create_allocation(self):
        data = {"channel": "bc", "antennas": [4, 2, 3], "alpha": [0.9, 0.6]}
        response = self.client.post("/api/alloc/", json=data)
        self.assertEqual(response.status_code, 200)
        allocation = response.get_json()["allocation"]
        self.assertEqual(allocation["regime"], "BC_PhiNonPos")
        self.assertAlmostEqual(allocation["dof"]["sum_dof"], 3.6, places=9)
        self.assertAlmostEqual(allocation["policy"]["A1"], 0.6, places=9)

    # Test a Case II boundary point with the constraint it lies on
    def test_ic2_point(self):
        data = {"channel": "ic", "antennas": [2, 4, 1, 3], "alpha": [0.4, 0.3], "lam": 0.6}
        response = self.client.post("/api/alloc/ic2", json=data)
        self.assertEqual(response.status_code, 200)
        body = response.get_json()
        self.assertEqual(body["solution"]["branch"], "D")
        self.assertAlmostEqual(body["solution"]["d2"], 2.2, places=9)
        self.assertEqual(body["constraint"]["label"], "L4")
        self.assertIn("D", body["branches"])

    # Test that the Case II program is refused for a Case I configuration with 422
    def test_ic2_point_wrong_regime(self):
        data = {"channel": "ic", "antennas": [4, 3, 2, 3], "alpha": [0.5, 0.5], "lam": 0.5}
        response = self.client.post("/api/alloc/ic2", json=data)
        self.assertEqual(response.status_code, 422)

    # Test a passing verification at the testing grid step
    def test_verify_passes(self):
        data = {"channel": "bc", "antennas": [4, 2, 3], "alpha": [0.9, 0.6]}
        response = self.client.post("/api/verify/", json=data)
        self.assertEqual(response.status_code, 200)
        report = response.get_json()["report"]
        self.assertTrue(report["passed"])
        self.assertEqual(report["step"], 0.005)

    # Test that a coarse grid reports a conflict with 409
    def test_verify_conflict(self):
        data = {"channel": "bc", "antennas": [4, 2, 3], "alpha": [0.45, 0.3], "grid_step": 0.1}
        response = self.client.post("/api/verify/", json=data)
        self.assertEqual(response.status_code, 409)
        self.assertEqual(response.get_json()["message"], "Verification failed")

    # Test a small rate simulation and its predicted slopes
    def test_simulate(self):
        data = {"channel": "bc", "antennas": [4, 2, 3], "alpha": [0.9, 0.6], "snr_db": "30:60:10", "trials": 100}
        response = self.client.post("/api/simulate/", json=data)
        self.assertEqual(response.status_code, 200)
        body = response.get_json()
        self.assertAlmostEqual(body["predicted"]["sum"], 3.6, places=9)
        self.assertEqual(body["estimate"]["trials"], 100)

    # Test that simulations below the minimum trial count fail validation
    def test_simulate_too_few_trials(self):
        data = {"channel": "bc", "antennas": [4, 2, 3], "alpha": [0.9, 0.6], "trials": 10}
        response = self.client.post("/api/simulate/", json=data)
        self.assertEqual(response.status_code, 400)

    # Test the residual interference sweep
    def test_residual_sweep(self):
        response = self.client.post("/api/simulate/residual", json={"alpha": 0.5, "trials": 200})
        self.assertEqual(response.status_code, 200)
        body = response.get_json()
        self.assertEqual(body["expected_slope"], -0.5)
        slopes = {s["message"]: s["slope"] for s in body["estimate"]["slopes"]}
        self.assertAlmostEqual(slopes["residual"], -0.5, delta=0.1)

    # Test that a space-time fraction alone selects the (alpha2, 1) slot
    def test_simulate_rho_only(self):
        data = {"channel": "bc", "antennas": [4, 2, 3], "alpha": [0.3, 0.2], "snr_db": "30:60:10", "trials": 100,
                "rho": 0.5}
        response = self.client.post("/api/simulate/", json=data)
        self.assertEqual(response.status_code, 200)
        policy = response.get_json()["policy"]
        self.assertEqual((policy["A1"], policy["A2"], policy["rho"]), (0.2, 1.0, 0.5))
        self.assertEqual(policy["scheme"], "space-time")

    # Test that rho = 1 alone falls back to the recommended policy
    def test_simulate_rho_one(self):
        data = {"channel": "bc", "antennas": [4, 2, 3], "alpha": [0.9, 0.6], "snr_db": "30:60:10", "trials": 100,
                "rho": 1.0}
        response = self.client.post("/api/simulate/", json=data)
        self.assertEqual(response.status_code, 200)
        body = response.get_json()
        self.assertEqual(body["policy"]["A1"], 0.6)
        self.assertEqual(body["policy"]["scheme"], "rate-splitting")
        self.assertAlmostEqual(body["predicted"]["sum"], 3.6, places=9)

    # Test the rate limiter body on any route
    def test_rate_limited_body(self):
        @self.app.route("/api/limited")
        def limited():
            abort(429)
        response = self.client.get("/api/limited")
        self.assertEqual(response.status_code, 429)
        body = response.get_json()
        self.assertEqual(body["error"], "Too Many Requests")
        self.assertNotIn("Simulation", body["message"])

    # Test unknown paths and wrong methods
    def test_not_found_and_method(self):
        response = self.client.get("/api/unknown")
        self.assertEqual(response.status_code, 404)
        self.assertEqual(response.get_json()["error"], "Not Found")
        response = self.client.get("/api/alloc/")
        self.assertEqual(response.status_code, 405)


if __name__ == "__main__":
    unittest.main()
