// Browser entry point. The service URL can be overridden with
// ?api=http://host:port for setups where the service is not local.

import { mountApp } from './app.js';

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get('api') ?? 'http://127.0.0.1:8000';

const root = document.getElementById('app');
if (root) {
  mountApp(root, { baseUrl });
}
